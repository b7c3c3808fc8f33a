#include "iavs/errors.hpp"
#include "iavs/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iavs {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
    double mx = neg_inf;
    for (double x : v)
        mx = std::max(mx, x);
    if (mx == neg_inf)
        return neg_inf;
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - mx);
    return mx + std::log(s);
}

void stage_log_weights(std::span<const double> log_ml, double dt, std::vector<double> &out) {
    out.resize(log_ml.size());
    for (std::size_t j = 0; j < log_ml.size(); ++j)
        out[j] = log_ml[j] == neg_inf ? neg_inf : dt * log_ml[j];
}

} // namespace

double weights_ess(std::span<const double> log_weights) {
    double mx = neg_inf;
    for (double x : log_weights)
        mx = std::max(mx, x);
    if (mx == neg_inf)
        return 0.0;
    double s = 0.0;
    double s2 = 0.0;
    for (double x : log_weights) {
        const double w = std::exp(x - mx);
        s += w;
        s2 += w * w;
    }
    return s * s / s2;
}

double next_temperature(std::span<const double> log_ml, double t_prev, double target_ess) {
    const double n = static_cast<double>(log_ml.size());
    std::vector<double> lw;
    auto ess_at = [&](double t) {
        stage_log_weights(log_ml, t - t_prev, lw);
        return weights_ess(lw);
    };
    if (ess_at(1.0) >= target_ess)
        return 1.0;
    double lo = t_prev;
    double hi = 1.0;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double e = ess_at(mid);
        if (std::abs(e - target_ess) <= 0.005 * n)
            return mid;
        if (e >= target_ess)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-6)
            break;
    }
    return lo > t_prev ? lo : hi;
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, double u) {
    const std::size_t n = weights.size();
    std::vector<double> cum(n);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        s += weights[j];
        cum[j] = s;
    }
    std::vector<std::size_t> idx(n);
    std::size_t j = 0;
    const double step = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pos = (u + static_cast<double>(i) * step) * s;
        while (j + 1 < n && cum[j] <= pos)
            ++j;
        idx[i] = j;
    }
    return idx;
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, Rng &rng) {
    return systematic_resample(weights, uniform01(rng) / static_cast<double>(weights.size()));
}

SmcResult smc_run(Model &model, const SmcConfig &cfg, std::uint64_t seed) {
    cfg.adapt.validate();
    if (cfg.particles < 2)
        throw ConfigError("SMC needs at least two particles");
    if (cfg.steps < 1)
        throw ConfigError("SMC needs at least one move step per stage");
    if (!(cfg.ess_fraction > 0.0 && cfg.ess_fraction < 1.0))
        throw ConfigError("ESS fraction must lie in (0, 1)");

    const std::size_t n = cfg.particles;
    const std::size_t p = model.p();
    Rng rng = make_rng(seed, 1);

    std::vector<ChainState> particles;
    particles.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        particles.push_back(make_chain_state(draw_from_prior(p, model.prior(), rng), model, 0.0));

    SmcResult out;
    out.eta = init_proposal_params(p, model.prior().mean_inclusion(), cfg.adapt);
    std::vector<double> log_ml(n);
    std::vector<double> log_w;
    std::vector<double> w(n);
    double t = 0.0;
    while (t < 1.0) {
        if (out.stages.size() >= cfg.max_stages)
            throw NumericalFailure("SMC exceeded the maximum number of tempering stages");
        for (std::size_t j = 0; j < n; ++j)
            log_ml[j] = particles[j].log_ml;
        const double t_next = next_temperature(log_ml, t, cfg.ess_fraction * static_cast<double>(n));
        stage_log_weights(log_ml, t_next - t, log_w);

        SmcStage stage;
        stage.temperature = t_next;
        const double lse = log_sum_exp(log_w);
        if (!std::isfinite(lse))
            throw DegenerateWeights("all SMC stage weights underflowed");
        stage.log_mean_weight = lse - std::log(static_cast<double>(n));
        stage.ess = weights_ess(log_w);
        for (std::size_t j = 0; j < n; ++j)
            w[j] = std::exp(log_w[j] - lse);

        const auto idx = systematic_resample(w, rng);
        std::vector<ChainState> next;
        next.reserve(n);
        for (auto j : idx) {
            next.push_back(particles[j]);
            next.back().temperature = t_next;
        }
        particles = std::move(next);

        AdaptCounter counter;
        double acc_sum = 0.0;
        std::size_t moved = 0;
        for (std::size_t k = 0; k < cfg.steps; ++k) {
            for (auto &chain : particles) {
                const auto rec = ia_step(chain, out.eta, cfg.adapt, cfg.rule, counter.next(), model, rng);
                acc_sum += rec.a_fwd;
                moved += rec.moved() ? 1 : 0;
            }
        }
        const double moves = static_cast<double>(n * cfg.steps);
        stage.acceptance = acc_sum / moves;
        stage.mutation_rate = static_cast<double>(moved) / moves;
        out.log_normalizer += stage.log_mean_weight;
        out.stages.push_back(stage);
        t = t_next;
    }

    PosteriorAccumulator acc(p, true);
    for (auto &chain : particles) {
        acc.add(chain.gamma);
        out.particles.push_back(std::move(chain.gamma));
    }
    out.summary = acc.summary();
    return out;
}

} // namespace iavs
