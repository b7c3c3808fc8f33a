#include "iavs/samplers.hpp"

#include "iavs/errors.hpp"

#include <cmath>

namespace iavs {

ChainState make_chain_state(ModelIndicator gamma, Model &model, double temperature) {
    ChainState s;
    s.log_ml = model.log_marginal_or_zero_mass(gamma);
    s.log_prior = model.log_prior(gamma);
    s.gamma = std::move(gamma);
    s.temperature = temperature;
    return s;
}

ModelIndicator draw_from_prior(std::size_t p, const PriorSpec &prior, Rng &rng) {
    double h = prior.mean_inclusion();
    if (const auto *b = std::get_if<BetaInclusion>(&prior.inclusion)) {
        std::gamma_distribution<double> ga(b->a, 1.0);
        std::gamma_distribution<double> gb(b->b, 1.0);
        const double x = ga(rng);
        const double y = gb(rng);
        h = x / (x + y);
    }
    ModelIndicator gamma(p);
    for (std::size_t j = 0; j < p; ++j) {
        if (uniform01(rng) < h)
            gamma.flip(j);
    }
    return gamma;
}

StepRecord ia_step(ChainState &chain, ProposalParams &eta, const AdaptConfig &cfg, AdaptRule rule, std::size_t i,
                   Model &model, Rng &rng) {
    auto [proposal, flips] = sample_proposal(chain.gamma, eta, rng);
    StepRecord rec;
    rec.proposed_change = flips.any_flip();
    rec.proposed_changes = flips.count();

    double prop_ml = chain.log_ml;
    double prop_prior = chain.log_prior;
    Acceptance acc;
    if (rec.proposed_change) {
        prop_ml = model.log_marginal_or_zero_mass(proposal);
        prop_prior = model.log_prior(proposal);
        acc = acceptance_probability(chain.log_kernel(), tempered_kernel(prop_ml, prop_prior, chain.temperature),
                                     flips, eta);
    }
    const double u = uniform01(rng);
    rec.accepted = u < acc.forward;
    rec.a_fwd = acc.forward;
    rec.a_rev = acc.reverse;
    if (rec.accepted && rec.proposed_change) {
        chain.gamma = std::move(proposal);
        chain.log_ml = prop_ml;
        chain.log_prior = prop_prior;
    }
    adapt(rule, eta, flips, acc.forward, acc.reverse, i, cfg);
    rec.model_size = chain.gamma.size();
    rec.log_kernel = chain.log_kernel();
    return rec;
}

namespace {

struct Budget {
    std::size_t per_chain_iterations;
    std::size_t per_chain_burnin;
    std::size_t truncated;
};

Budget split_budget(const McmcConfig &cfg) {
    if (cfg.chains == 0)
        throw ConfigError("need at least one chain");
    if (cfg.thin == 0)
        throw ConfigError("thin must be at least 1");
    const std::size_t r = cfg.chains;
    return {cfg.iterations / r, cfg.burnin / r, cfg.iterations % r + cfg.burnin % r};
}

// Shared driver: `step(chain_index, chain, rng, adapt_iteration)` advances one chain.
template <typename Step>
McmcResult round_robin(Model &model, const McmcConfig &cfg, std::uint64_t seed, std::vector<ModelIndicator> starts,
                       Step &&step) {
    const auto budget = split_budget(cfg);
    const std::size_t r = cfg.chains;
    const std::size_t p = model.p();

    std::vector<Rng> rngs;
    std::vector<ChainState> chains;
    for (std::size_t c = 0; c < r; ++c) {
        rngs.push_back(make_rng(seed, c + 1));
        if (starts.size() == r) {
            chains.push_back(make_chain_state(std::move(starts[c]), model));
        } else {
            chains.push_back(make_chain_state(draw_from_prior(p, model.prior(), rngs.back()), model));
        }
    }

    McmcResult out;
    out.per_chain_iterations = budget.per_chain_iterations;
    out.per_chain_burnin = budget.per_chain_burnin;
    out.truncated = budget.truncated;
    out.model_size.resize(r);
    out.log_kernel.resize(r);
    const std::size_t per_chain_total = budget.per_chain_burnin + budget.per_chain_iterations;
    if (cfg.keep_records)
        out.records.reserve(per_chain_total * r);
    for (auto &v : out.model_size)
        v.reserve(budget.per_chain_iterations / cfg.thin + 1);

    PosteriorAccumulator acc(p, cfg.track_models);
    std::size_t adapt_i = 1;
    for (std::size_t it = 1; it <= per_chain_total; ++it) {
        const bool keep = it > budget.per_chain_burnin && (it - budget.per_chain_burnin) % cfg.thin == 0;
        for (std::size_t c = 0; c < r; ++c) {
            StepRecord rec = step(chains[c], rngs[c], adapt_i++);
            rec.iteration = it;
            rec.chain = c;
            if (cfg.keep_records)
                out.records.push_back(rec);
            if (keep) {
                acc.add(chains[c].gamma);
                out.model_size[c].push_back(static_cast<double>(chains[c].gamma.size()));
                out.log_kernel[c].push_back(chains[c].log_kernel());
            }
        }
    }
    out.summary = acc.summary();
    for (auto &ch : chains)
        out.final_states.push_back(std::move(ch.gamma));
    return out;
}

} // namespace

McmcResult mca_run(Model &model, const McmcConfig &cfg, std::uint64_t seed, std::vector<ModelIndicator> starts) {
    cfg.adapt.validate();
    ProposalParams eta = init_proposal_params(model.p(), model.prior().mean_inclusion(), cfg.adapt);
    auto out = round_robin(model, cfg, seed, std::move(starts), [&](ChainState &chain, Rng &rng, std::size_t i) {
        return ia_step(chain, eta, cfg.adapt, cfg.rule, i, model, rng);
    });
    out.eta = std::move(eta);
    return out;
}

McmcResult mca_run(Model &model, const McmcConfig &cfg, std::uint64_t seed) {
    return mca_run(model, cfg, seed, {});
}

std::vector<std::pair<ModelIndicator, double>> multimove_proposals(const ModelIndicator &gamma) {
    const std::size_t p = gamma.p();
    const std::size_t k = gamma.size();
    const bool can_add = k < p;
    const bool can_remove = k > 0;
    const bool can_swap = k > 0 && k < p;
    const double moves = static_cast<double>(can_add + can_remove + can_swap);

    std::vector<std::size_t> in = gamma.indices();
    std::vector<std::size_t> out;
    out.reserve(p - k);
    for (std::size_t j = 0; j < p; ++j) {
        if (!gamma.test(j))
            out.push_back(j);
    }

    std::vector<std::pair<ModelIndicator, double>> props;
    if (can_add) {
        for (auto j : out) {
            auto g = gamma;
            g.flip(j);
            props.emplace_back(std::move(g), 1.0 / (moves * static_cast<double>(out.size())));
        }
    }
    if (can_remove) {
        for (auto j : in) {
            auto g = gamma;
            g.flip(j);
            props.emplace_back(std::move(g), 1.0 / (moves * static_cast<double>(in.size())));
        }
    }
    if (can_swap) {
        const double q = 1.0 / (moves * static_cast<double>(in.size() * out.size()));
        for (auto i : in) {
            for (auto j : out) {
                auto g = gamma;
                g.flip(i);
                g.flip(j);
                props.emplace_back(std::move(g), q);
            }
        }
    }
    return props;
}

namespace {

std::size_t uniform_index(Rng &rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

std::size_t nth_with_value(const ModelIndicator &gamma, std::size_t n, bool value) {
    for (std::size_t j = 0; j < gamma.p(); ++j) {
        if (gamma.test(j) == value) {
            if (n == 0)
                return j;
            --n;
        }
    }
    return gamma.p();
}

double log_move_probability(std::size_t k, std::size_t p, int type) {
    const int moves = (k < p) + (k > 0) + (k > 0 && k < p);
    const double kk = static_cast<double>(k);
    const double rest = static_cast<double>(p - k);
    switch (type) {
    case 0:
        return -std::log(moves * rest);
    case 1:
        return -std::log(moves * kk);
    default:
        return -std::log(moves * kk * rest);
    }
}

} // namespace

StepRecord multimove_mh_step(ChainState &chain, Model &model, Rng &rng) {
    const std::size_t p = chain.gamma.p();
    const std::size_t k = chain.gamma.size();
    int feasible[3];
    int n_feasible = 0;
    if (k < p)
        feasible[n_feasible++] = 0; // add
    if (k > 0)
        feasible[n_feasible++] = 1; // remove
    if (k > 0 && k < p)
        feasible[n_feasible++] = 2; // swap
    const int type = feasible[uniform_index(rng, static_cast<std::size_t>(n_feasible))];

    ModelIndicator proposal = chain.gamma;
    int reverse_type = type;
    if (type == 0) {
        proposal.flip(nth_with_value(chain.gamma, uniform_index(rng, p - k), false));
        reverse_type = 1;
    } else if (type == 1) {
        proposal.flip(nth_with_value(chain.gamma, uniform_index(rng, k), true));
        reverse_type = 0;
    } else {
        proposal.flip(nth_with_value(chain.gamma, uniform_index(rng, k), true));
        proposal.flip(nth_with_value(chain.gamma, uniform_index(rng, p - k), false));
    }

    const double prop_ml = model.log_marginal_or_zero_mass(proposal);
    const double prop_prior = model.log_prior(proposal);
    const double prop_kernel = tempered_kernel(prop_ml, prop_prior, chain.temperature);
    double a = 0.0;
    if (prop_kernel != -std::numeric_limits<double>::infinity()) {
        const double log_ratio = prop_kernel - chain.log_kernel() +
                                 log_move_probability(proposal.size(), p, reverse_type) -
                                 log_move_probability(k, p, type);
        a = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
    }
    StepRecord rec;
    rec.proposed_change = true;
    rec.proposed_changes = type == 2 ? 2 : 1;
    rec.a_fwd = a;
    rec.accepted = uniform01(rng) < a;
    if (rec.accepted) {
        chain.gamma = std::move(proposal);
        chain.log_ml = prop_ml;
        chain.log_prior = prop_prior;
    }
    rec.model_size = chain.gamma.size();
    rec.log_kernel = chain.log_kernel();
    return rec;
}

McmcResult multimove_run(Model &model, const McmcConfig &cfg, std::uint64_t seed) {
    auto out = round_robin(model, cfg, seed, {}, [&](ChainState &chain, Rng &rng, std::size_t) {
        return multimove_mh_step(chain, model, rng);
    });
    return out;
}

} // namespace iavs
