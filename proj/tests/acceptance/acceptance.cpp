// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
#include "iavs/diagnostics.hpp"
#include "iavs/samplers.hpp"
#include "iavs/synthetic.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace iavs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Instances

std::shared_ptr<const Dataset> p12_data() {
    SyntheticSpec s;
    s.n = 60;
    s.p = 12;
    s.signals = 3;
    s.noise_sd = 2.0;
    s.correlation = 0.3;
    s.seed = 3;
    return std::make_shared<const Dataset>(generate_synthetic(s).dataset());
}

PriorSpec p12_prior() { return PriorSpec{RidgePrior{100.0}, FixedInclusion{5.0 / 12.0}}; }

std::shared_ptr<const Dataset> p50_data() {
    SyntheticSpec s;
    s.n = 60;
    s.p = 50;
    s.signals = 5;
    s.noise_sd = 2.0;
    s.correlation = 0.9;
    s.seed = 1;
    return std::make_shared<const Dataset>(generate_synthetic(s).dataset());
}

const Enumeration &p12_exact() {
    static const Enumeration e = enumerate_posterior(*p12_data(), p12_prior());
    return e;
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double mean(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

// 1. Exact stationarity of the fixed-eta kernels on p = 4.
Verdict exact_stationarity() {
    const auto t0 = Clock::now();
    const std::size_t p = 4, m = 16;
    const auto data = oracle::small_dataset(40, p, 2024, 1.2, 0.3);
    const PriorSpec prior{RidgePrior{100.0}, FixedInclusion{0.4}};
    const auto exact = enumerate_posterior(*data, prior);
    Eigen::VectorXd pi(m);
    for (std::size_t s = 0; s < m; ++s)
        pi[static_cast<Eigen::Index>(s)] = exact.probabilities[s];

    auto rng = make_rng(2024, 0);
    std::vector<double> add(p), del(p);
    for (std::size_t j = 0; j < p; ++j) {
        add[j] = 0.05 + 0.9 * uniform01(rng);
        del[j] = 0.05 + 0.9 * uniform01(rng);
    }
    const ProposalParams eta(add, del, 0.001);

    // IA kernel from the library's proposal ratio and acceptance rule.
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t s = 0; s < m; ++s) {
        const auto from = ModelIndicator::from_mask(p, s);
        double off = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            if (t == s)
                continue;
            const auto flips = flips_between(from, ModelIndicator::from_mask(p, t));
            const double q = oracle::proposal_probability(s, t, p, eta);
            const auto acc = acceptance_probability(exact.log_kernel(s), exact.log_kernel(t), flips, eta);
            P(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = q * acc.forward;
            off += q * acc.forward;
        }
        P(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = 1.0 - off;
    }

    // Multi-move kernel from the library's move list.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t s = 0; s < m; ++s) {
        double off = 0.0;
        for (const auto &[g, q] : multimove_proposals(ModelIndicator::from_mask(p, s))) {
            const std::size_t t = g.to_mask();
            double qr = 0.0;
            for (const auto &[back, qb] : multimove_proposals(g))
                if (back.to_mask() == s)
                    qr = qb;
            const double a = std::min(1.0, std::exp(exact.log_kernel(t) - exact.log_kernel(s)) * qr / q);
            M(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) += q * a;
            off += q * a;
        }
        M(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = 1.0 - off;
    }

    const double e1 = oracle::max_stationarity_error(pi, P), b1 = oracle::max_detailed_balance_error(pi, P);
    const double e2 = oracle::max_stationarity_error(pi, M), b2 = oracle::max_detailed_balance_error(pi, M);
    const double secs = seconds_since(t0);
    const bool ok = e1 < 1e-10 && b1 < 1e-10 && e2 < 1e-10 && b2 < 1e-10 && secs < 1.0;
    return {ok, fmt("IA |pi'P-pi'|=%.1e balance=%.1e; multi-move %.1e / %.1e; %.3fs", e1, b1, e2, b2, secs)};
}

// 2. Oracle agreement on p = 12.
Verdict oracle_agreement() {
    const auto t0 = Clock::now();
    const auto data = p12_data();
    const auto &exact = p12_exact();
    int good = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Model model(data, p12_prior());
        McmcConfig cfg;
        cfg.iterations = 200000;
        cfg.burnin = 10000;
        cfg.keep_records = false;
        cfg.track_models = false;
        const auto res = mca_run(model, cfg, seed);
        const double err = max_abs_diff(res.summary.pips, exact.gold.theta);
        worst = std::max(worst, err);
        good += err <= 0.02;
    }
    const double secs = seconds_since(t0);
    return {good >= 9 && secs < 60.0, fmt("%d/10 seeds within 0.02 (worst %.4f); %.1fs", good, worst, secs)};
}

// 3. Mutation-rate targeting.
Verdict mutation_targeting() {
    std::string detail;
    bool ok = true;
    const std::pair<const char *, std::shared_ptr<const Dataset>> instances[] = {{"p=12", p12_data()},
                                                                                 {"p=50", p50_data()}};
    for (const auto &[name, data] : instances) {
        const PriorSpec prior{RidgePrior{100.0}, FixedInclusion{5.0 / static_cast<double>(data->p())}};
        bool mca_no_worse = false;
        for (double tau : {0.25, 0.45}) {
            double dev[2];
            int slot = 0;
            for (std::size_t chains : {1u, 5u}) {
                std::vector<double> rates;
                for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                    Model model(data, prior);
                    McmcConfig cfg;
                    cfg.adapt.tau = tau;
                    cfg.chains = chains;
                    cfg.iterations = 100000;
                    cfg.burnin = 10000;
                    cfg.track_models = false;
                    const auto res = mca_run(model, cfg, seed);
                    rates.push_back(mutation_rate(res.records, res.per_chain_burnin).realized);
                }
                const double avg = mean(rates);
                dev[slot++] = std::abs(avg - tau);
                if (chains == 1)
                    ok = ok && std::abs(avg - tau) <= 0.05;
                detail += fmt("%s tau=%.2f r=%zu: %.3f; ", name, tau, chains, avg);
            }
            mca_no_worse = mca_no_worse || dev[1] <= dev[0];
        }
        ok = ok && mca_no_worse;
    }
    return {ok, detail};
}

// 4. RAPA with w = 0 reproduces IA.
Verdict rapa_degeneracy() {
    const auto data = p12_data();
    Model m1(data, p12_prior()), m2(data, p12_prior());
    McmcConfig ia, rapa;
    ia.rule = AdaptRule::Individual;
    rapa.rule = AdaptRule::ReverseAccelerated;
    rapa.adapt.w = 0.0;
    ia.iterations = rapa.iterations = 10000;
    ia.burnin = rapa.burnin = 0;
    const auto a = mca_run(m1, ia, 31);
    const auto b = mca_run(m2, rapa, 31);
    std::size_t same = 0;
    for (std::size_t i = 0; i < std::min(a.records.size(), b.records.size()); ++i) {
        const auto &x = a.records[i], &y = b.records[i];
        same += x.log_kernel == y.log_kernel && x.a_fwd == y.a_fwd && x.accepted == y.accepted &&
                x.model_size == y.model_size;
    }
    const bool ok = same == 10000 && a.records.size() == 10000 && a.eta == b.eta && a.final_states == b.final_states;
    return {ok, fmt("%zu/10000 identical steps, final eta %s", same, a.eta == b.eta ? "identical" : "differs")};
}

// 5. A/D odds property.
Verdict ad_odds() {
    Model model(p12_data(), p12_prior());
    McmcConfig cfg;
    cfg.iterations = 1000000;
    cfg.burnin = 0;
    cfg.keep_records = false;
    cfg.track_models = false;
    const auto res = mca_run(model, cfg, 5);
    const auto rows = ad_ratio_report(res.eta, p12_exact().gold);
    std::vector<double> x, y;
    for (const auto &r : rows) {
        x.push_back(std::log(r.ad_ratio));
        y.push_back(std::log(r.pip_odds));
    }
    const double r = rows.size() >= 3 ? pearson_correlation(x, y) : 0.0;
    return {rows.size() >= 3 && r >= 0.9, fmt("%zu variables with 0.05<psi<0.95, correlation %.3f", rows.size(), r)};
}

// 6. Mixing advantage over the multi-move baseline at equal runtime.
Verdict mixing_advantage() {
    SyntheticSpec s;
    // Many moderately strong signals: the regime where single add/remove/swap
    // moves struggle. On sparse designs with cheap cached evaluations the
    // baseline is competitive at equal runtime.
    s.n = 200;
    s.p = 100;
    s.signals = 20;
    s.noise_sd = 0.5;
    s.correlation = 0.9;
    s.seed = 6;
    const auto data = std::make_shared<const Dataset>(generate_synthetic(s).dataset());
    const PriorSpec prior{RidgePrior{100.0}, FixedInclusion{5.0 / 100.0}};
    const double budget = 2.0; // seconds per sampler per seed

    auto cost_per_iteration = [&](bool adaptive) {
        Model model(data, prior);
        McmcConfig cfg;
        cfg.iterations = 20000;
        cfg.burnin = 0;
        cfg.track_models = false;
        const auto t0 = Clock::now();
        adaptive ? mca_run(model, cfg, 999) : multimove_run(model, cfg, 999);
        return seconds_since(t0) / 20000.0;
    };
    const double c_ia = cost_per_iteration(true), c_mh = cost_per_iteration(false);
    const auto n_ia = static_cast<std::size_t>(budget / c_ia), n_mh = static_cast<std::size_t>(budget / c_mh);

    int wins = 0;
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Model m1(data, prior), m2(data, prior);
        McmcConfig a;
        a.iterations = n_ia;
        a.burnin = n_ia / 10;
        a.track_models = false;
        a.keep_records = false;
        McmcConfig b = a;
        b.iterations = n_mh;
        b.burnin = n_mh / 10;
        const double e_ia = ess(mca_run(m1, a, seed).model_size[0]).value;
        const double e_mh = ess(multimove_run(m2, b, seed).model_size[0]).value;
        ratios.push_back(e_ia / e_mh);
        wins += e_ia >= 2.0 * e_mh;
    }
    std::sort(ratios.begin(), ratios.end());
    return {wins >= 8, fmt("%d/10 seeds with ESS ratio >= 2 (median %.2f, min %.2f); %zu vs %zu iterations", wins,
                           0.5 * (ratios[4] + ratios[5]), ratios[0], n_ia, n_mh)};
}

// 7. Parallel tempering on a bimodal posterior.
Verdict pt_adaptation() {
    // y is explained either by {x1, x2} or by x3 = x1 + x2 + small noise;
    // the remaining columns are nulls that spread the tempered posteriors.
    const std::size_t n = 500, p = 100;
    auto rng = make_rng(70, 0);
    std::normal_distribution<double> z;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        for (std::size_t j = 0; j < p; ++j)
            X(r, static_cast<Eigen::Index>(j)) = z(rng);
        X(r, 2) = X(r, 0) + X(r, 1) + 0.07 * z(rng);
        y[r] = X(r, 0) + X(r, 1) + 0.5 * z(rng);
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j)
        names.push_back("x" + std::to_string(j + 1));
    const auto data = std::make_shared<const Dataset>(make_dataset(y, X, names));
    const PriorSpec prior{RidgePrior{100.0}, FixedInclusion{0.2}};

    Model model(data, prior);
    PtConfig cfg;
    cfg.temperatures = 6;
    cfg.sweeps = 100000;
    cfg.burnin = 0;
    cfg.keep_records = false;
    const auto res = pt_run(model, cfg, 7);
    const std::size_t window = 10000;
    double accepted = 0.0;
    for (std::size_t s = res.swaps.size() - window; s < res.swaps.size(); ++s)
        accepted += res.swaps[s].accepted;
    const double rate = accepted / window;

    // Posterior mass of each mode as seen by the cold chain.
    double mode_a = 0.0, mode_b = 0.0;
    for (const auto &[g, prob] : res.summary.top_models) {
        const bool x1 = g.test(0), x2 = g.test(1), x3 = g.test(2);
        mode_a += (x1 && x2 && !x3) ? prob : 0.0;
        mode_b += (!x1 && !x2 && x3) ? prob : 0.0;
    }
    const bool ok = std::abs(rate - 0.234) <= 0.08 && res.ladder_always_valid && res.final_ladder.back() == 1.0;
    std::string ladder;
    for (double t : res.final_ladder)
        ladder += fmt("%.3g ", t);
    return {ok, fmt("top-model mass {x1,x2}+ %.2f, {x3}+ %.2f; trailing swap rate %.3f; ladder %s%s", mode_a, mode_b,
                    rate, ladder.c_str(), res.ladder_always_valid ? "(monotone throughout)" : "(INVALID)")};
}

// 8. SMC correctness.
Verdict smc_correctness() {
    const auto data = p12_data();
    const auto &exact = p12_exact();
    bool all_t1 = true, ess_ok = true;
    double worst_pip = 0.0, min_ess = 1e300;
    std::vector<double> ratio;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Model model(data, p12_prior());
        SmcConfig cfg;
        cfg.particles = 2000;
        cfg.steps = 10;
        cfg.ess_fraction = 0.9;
        const auto res = smc_run(model, cfg, seed);
        all_t1 = all_t1 && res.stages.back().temperature == 1.0;
        for (const auto &st : res.stages) {
            min_ess = std::min(min_ess, st.ess);
            ess_ok = ess_ok && st.ess >= 0.85 * 2000;
        }
        worst_pip = std::max(worst_pip, max_abs_diff(res.summary.pips, exact.gold.theta));
        ratio.push_back(std::exp(res.log_normalizer - exact.log_normalizer));
    }
    const double rbar = mean(ratio);
    double var = 0.0;
    for (double r : ratio)
        var += (r - rbar) * (r - rbar);
    const double se = std::sqrt(var / (ratio.size() - 1) / ratio.size());
    const bool z_ok = std::abs(rbar - 1.0) <= 3.0 * se;

    std::vector<double> w1, w25;
    for (std::uint64_t seed = 101; seed <= 120; ++seed) {
        for (std::size_t k : {1u, 25u}) {
            Model model(data, p12_prior());
            SmcConfig cfg;
            cfg.particles = 2000;
            cfg.steps = k;
            const auto res = smc_run(model, cfg, seed);
            (k == 1 ? w1 : w25).push_back(wmse({res.summary.pips}, exact.gold));
        }
    }
    const bool mono = mean(w25) <= mean(w1);
    const bool ok = all_t1 && ess_ok && worst_pip <= 0.03 && z_ok && mono;
    return {ok, fmt("t=1 reached %s; min stage ESS %.0f; worst PIP error %.4f; Z/Z* mean %.4f (se %.4f); "
                    "WMSE K=1 %.2e vs K=25 %.2e (%s)",
                    all_t1 ? "always" : "NOT always", min_ess, worst_pip, rbar, se, mean(w1), mean(w25),
                    mono ? "ordered" : "K=25 above K=1")};
}

// 9. Diminishing adaptation.
Verdict diminishing_adaptation() {
    const auto data = p12_data();
    Model model(data, p12_prior());
    AdaptConfig cfg;
    auto rng = make_rng(9, 1);
    auto eta = init_proposal_params(12, 5.0 / 12.0, cfg);
    auto chain = make_chain_state(draw_from_prior(12, p12_prior(), rng), model);
    const std::size_t total = 1000000, window = 10000;
    std::size_t violations = 0;
    std::vector<double> window_max(total / window, 0.0);
    for (std::size_t i = 1; i <= total; ++i) {
        const auto before = eta;
        ia_step(chain, eta, cfg, AdaptRule::ReverseAccelerated, i, model, rng);
        const double bound = 2.0 * step_size(i, cfg) * std::max(cfg.tau, 1.0 - cfg.tau) * (1 + 1e-12);
        double wmax = 0.0;
        for (std::size_t j = 0; j < 12; ++j) {
            violations += std::abs(eta.add_logit(j) - before.add_logit(j)) > bound;
            violations += std::abs(eta.del_logit(j) - before.del_logit(j)) > bound;
            wmax = std::max(wmax, std::abs(eta.add(j) - before.add(j)));
        }
        auto &slot = window_max[(i - 1) / window];
        slot = std::max(slot, wmax);
    }
    // Decreasing at the window scale: every window maximum is below the
    // largest maximum of all earlier windows, and the trend is downward.
    std::size_t rises = 0;
    double running = window_max[0];
    for (std::size_t w = 1; w < window_max.size(); ++w) {
        rises += window_max[w] > running;
        running = std::max(running, window_max[w]);
    }
    const std::size_t q = window_max.size() / 4;
    const double first = *std::max_element(window_max.begin(), window_max.begin() + q);
    const double last = *std::max_element(window_max.end() - q, window_max.end());
    const bool ok = violations == 0 && rises == 0 && last < first;
    return {ok, fmt("%zu increment-bound violations; window maxima %.2e -> %.2e (first/last quarter), %zu new highs", violations,
                    first, last, rises)};
}

std::size_t resident_bytes() {
    std::ifstream statm("/proc/self/statm");
    std::size_t pages = 0, resident = 0;
    statm >> pages >> resident;
    return resident * static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
}

// 10. Scale smoke test.
Verdict scale_smoke() {
    SyntheticSpec s;
    s.n = 60;
    s.p = 20000;
    s.signals = 5;
    s.seed = 10;
    const auto data = std::make_shared<const Dataset>(generate_synthetic(s).dataset());
    const std::size_t capacity = 1 << 16;
    Model model(data, PriorSpec{RidgePrior{100.0}, FixedInclusion{5.0 / 20000.0}}, capacity);
    AdaptConfig cfg;
    cfg.epsilon = 1e-6;
    auto rng = make_rng(10, 1);
    auto eta = init_proposal_params(data->p(), 5.0 / 20000.0, cfg);
    auto chain = make_chain_state(ModelIndicator(data->p()), model);
    const std::size_t total = 100000;
    std::size_t rss_early = 0;
    const auto t0 = Clock::now();
    try {
        for (std::size_t i = 1; i <= total; ++i) {
            ia_step(chain, eta, cfg, AdaptRule::ReverseAccelerated, i, model, rng);
            if (i == total / 10)
                rss_early = resident_bytes();
        }
    } catch (const std::exception &e) {
        return {false, std::string("run failed: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    const std::size_t rss_end = resident_bytes();
    const std::size_t per_entry_bound = 256;
    const bool cache_ok = model.cache().size() <= capacity && model.cache().approx_bytes() <= capacity * per_entry_bound;
    return {cache_ok, fmt("100000 iterations in %.1fs (%.0f it/s); cache %zu entries, %.1f MB; RSS %.1f -> %.1f MB",
                          secs, total / secs, model.cache().size(), model.cache().approx_bytes() / 1e6,
                          rss_early / 1e6, rss_end / 1e6)};
}

} // namespace

int main(int argc, char **argv) {
    // Optional arguments select criteria by number.
    std::vector<int> only;
    for (int a = 1; a < argc; ++a)
        only.push_back(std::atoi(argv[a]));
    const std::pair<const char *, std::function<Verdict()>> criteria[] = {
        {"exact stationarity", exact_stationarity},
        {"oracle agreement", oracle_agreement},
        {"mutation-rate targeting", mutation_targeting},
        {"RAPA degeneracy", rapa_degeneracy},
        {"A/D odds", ad_odds},
        {"mixing advantage", mixing_advantage},
        {"PT adaptation", pt_adaptation},
        {"SMC correctness", smc_correctness},
        {"diminishing adaptation", diminishing_adaptation},
        {"scale smoke test", scale_smoke},
    };
    int failures = 0;
    int index = 1;
    for (const auto &[name, check] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), index) == only.end()) {
            ++index;
            continue;
        }
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("%s %2d %-24s %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", index++, name, v.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
