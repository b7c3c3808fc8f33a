#include "iavs/errors.hpp"
#include "iavs/samplers.hpp"

#include <cmath>
#include <numeric>

namespace iavs {

TemperatureLadder TemperatureLadder::geometric(std::size_t m) {
    if (m < 2)
        throw ConfigError("parallel tempering needs at least two temperatures");
    TemperatureLadder ladder;
    ladder.t.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        ladder.t[j] = std::pow(0.5, static_cast<double>(m - 1 - j));
    return ladder;
}

std::vector<double> TemperatureLadder::increments() const {
    std::vector<double> rho(t.size() - 1);
    for (std::size_t j = 0; j + 1 < t.size(); ++j)
        rho[j] = t[j + 1] - t[j];
    return rho;
}

void TemperatureLadder::adapt(std::size_t lower, double acceptance) {
    ++updates;
    const double zeta = zeta0 * std::pow(static_cast<double>(updates), -lambda);
    auto rho = increments();
    rho[lower] = std::max(rho_min, rho[lower] + zeta * (acceptance - target));

    // Keep t_1 >= rho_min: shrink the excess above rho_min proportionally.
    const double budget = 1.0 - rho_min;
    const double total = std::accumulate(rho.begin(), rho.end(), 0.0);
    if (total > budget) {
        const double floor_total = rho_min * static_cast<double>(rho.size());
        const double scale = (budget - floor_total) / (total - floor_total);
        for (auto &r : rho)
            r = rho_min + (r - rho_min) * scale;
    }
    const std::size_t m = t.size();
    t[m - 1] = 1.0;
    for (std::size_t j = m - 1; j-- > 0;)
        t[j] = t[j + 1] - rho[j];
}

bool TemperatureLadder::valid() const {
    if (t.empty() || t.back() != 1.0 || !(t.front() > 0.0))
        return false;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        if (!(t[j + 1] - t[j] >= rho_min * (1.0 - 1e-9)))
            return false;
    }
    return true;
}

PtState make_pt_state(Model &model, const PtConfig &cfg, Rng &rng) {
    cfg.adapt.validate();
    PtState state;
    state.ladder = TemperatureLadder::geometric(cfg.temperatures);
    state.ladder.zeta0 = cfg.zeta0;
    state.ladder.lambda = cfg.adapt.lambda;
    state.ladder.target = cfg.swap_target;
    const auto eta = init_proposal_params(model.p(), model.prior().mean_inclusion(), cfg.adapt);
    for (std::size_t k = 0; k < cfg.temperatures; ++k) {
        state.chains.push_back(
            make_chain_state(draw_from_prior(model.p(), model.prior(), rng), model, state.ladder.t[k]));
        state.etas.push_back(eta);
    }
    return state;
}

double swap_log_ratio(double log_ml_k, double log_ml_l, double t_k, double t_l) {
    if (t_k == t_l || log_ml_k == log_ml_l)
        return 0.0;
    return (t_k - t_l) * (log_ml_l - log_ml_k);
}

PtSweep pt_step(PtState &state, const PtConfig &cfg, Model &model, Rng &rng) {
    const std::size_t m = state.chains.size();
    PtSweep sweep;
    ++state.sweep;
    for (std::size_t k = 0; k < m; ++k) {
        auto rec = ia_step(state.chains[k], state.etas[k], cfg.adapt, cfg.rule, state.sweep, model, rng);
        rec.iteration = state.sweep;
        rec.chain = k;
        sweep.steps.push_back(rec);
    }

    const std::size_t k = std::min(m - 2, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(m - 1)));
    const std::size_t l = k + 1;
    auto &ck = state.chains[k];
    auto &cl = state.chains[l];
    double a;
    if (ck.log_ml == -std::numeric_limits<double>::infinity() ||
        cl.log_ml == -std::numeric_limits<double>::infinity()) {
        a = ck.log_ml == cl.log_ml ? 1.0 : 0.0;
    } else {
        const double lr = swap_log_ratio(ck.log_ml, cl.log_ml, ck.temperature, cl.temperature);
        a = lr >= 0.0 ? 1.0 : std::exp(lr);
    }
    sweep.swap.lower = k;
    sweep.swap.acceptance = a;
    sweep.swap.accepted = uniform01(rng) < a;
    if (sweep.swap.accepted) {
        std::swap(ck.gamma, cl.gamma);
        std::swap(ck.log_ml, cl.log_ml);
        std::swap(ck.log_prior, cl.log_prior);
    }

    state.ladder.adapt(k, a);
    for (std::size_t j = 0; j < m; ++j)
        state.chains[j].temperature = state.ladder.t[j];
    return sweep;
}

PtResult pt_run(Model &model, const PtConfig &cfg, std::uint64_t seed) {
    if (cfg.thin == 0)
        throw ConfigError("thin must be at least 1");
    Rng rng = make_rng(seed, 1);
    PtState state = make_pt_state(model, cfg, rng);
    PtResult out;
    PosteriorAccumulator acc(model.p(), cfg.track_models);
    const std::size_t total = cfg.burnin + cfg.sweeps;
    out.swaps.reserve(total);
    for (std::size_t s = 1; s <= total; ++s) {
        auto sweep = pt_step(state, cfg, model, rng);
        out.swaps.push_back(sweep.swap);
        out.ladder_always_valid = out.ladder_always_valid && state.ladder.valid();
        if (cfg.keep_records)
            out.records.push_back(sweep.steps.back());
        if (s > cfg.burnin && (s - cfg.burnin) % cfg.thin == 0) {
            const auto &cold = state.chains.back();
            acc.add(cold.gamma);
            out.model_size.push_back(static_cast<double>(cold.gamma.size()));
        }
    }
    out.summary = acc.summary();
    out.etas = state.etas;
    out.final_ladder = state.ladder.t;
    return out;
}

} // namespace iavs
