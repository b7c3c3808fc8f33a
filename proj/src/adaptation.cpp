#include "iavs/adaptation.hpp"

#include "iavs/errors.hpp"

#include <cmath>
#include <string>

namespace iavs {

void AdaptConfig::validate() const {
    if (!(tau > 0.0 && tau < 1.0))
        throw ConfigError("tau must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw ConfigError("epsilon must lie in (0, 1/2)");
    if (!(lambda > 0.5 && lambda <= 1.0))
        throw ConfigError("lambda must lie in (1/2, 1]");
    if (!(phi0 >= 0.0) || !std::isfinite(phi0))
        throw ConfigError("phi0 must be non-negative");
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw ConfigError("nu must be positive");
    if (!(w >= 0.0 && w <= 1.0))
        throw ConfigError("w must lie in [0, 1]");
}

double step_size(std::size_t i, const AdaptConfig &cfg) {
    return cfg.phi0 * std::pow(static_cast<double>(i), -cfg.lambda);
}

ProposalParams init_proposal_params(std::size_t p, double h, const AdaptConfig &cfg) {
    if (!(h > 0.0 && h < 1.0))
        throw ConfigError("effective h must lie in (0, 1)");
    const double pp = static_cast<double>(p);
    const double a = cfg.nu / ((1.0 - h) * pp);
    const double d = cfg.nu / (h * pp);
    const double eps = cfg.epsilon;
    if (!(a > eps && a < 1.0 - eps && d > eps && d < 1.0 - eps))
        throw InitOutOfRange("initial A = " + std::to_string(a) + ", D = " + std::to_string(d) +
                             " fall outside (eps, 1 - eps); adjust nu or epsilon");
    return ProposalParams(std::vector<double>(p, a), std::vector<double>(p, d), eps);
}

void ia_update(ProposalParams &eta, const FlipRecord &flips, double a_fwd, std::size_t i, const AdaptConfig &cfg) {
    const double delta = step_size(i, cfg) * (a_fwd - cfg.tau);
    for (auto j : flips.add_flips)
        eta.shift_add_logit(j, delta);
    for (auto j : flips.del_flips)
        eta.shift_del_logit(j, delta);
}

void rapa_update(ProposalParams &eta, const FlipRecord &flips, double a_fwd, double a_rev, std::size_t i,
                 const AdaptConfig &cfg) {
    const double phi = step_size(i, cfg);
    const double forward = phi * (a_fwd - cfg.tau) * (1.0 - cfg.w * a_fwd);
    const double reverse = phi * (a_rev - cfg.tau) * (cfg.w * a_fwd);
    // Under the reverse move an added variable is deleted and vice versa, so
    // add flips also move D and delete flips also move A.
    for (auto j : flips.add_flips) {
        eta.shift_add_logit(j, forward);
        eta.shift_del_logit(j, reverse);
    }
    for (auto j : flips.del_flips) {
        eta.shift_del_logit(j, forward);
        eta.shift_add_logit(j, reverse);
    }
}

ProposalParams ia_updated(ProposalParams eta, const FlipRecord &flips, double a_fwd, std::size_t i,
                          const AdaptConfig &cfg) {
    ia_update(eta, flips, a_fwd, i, cfg);
    return eta;
}

ProposalParams rapa_updated(ProposalParams eta, const FlipRecord &flips, double a_fwd, double a_rev,
                            std::size_t i, const AdaptConfig &cfg) {
    rapa_update(eta, flips, a_fwd, a_rev, i, cfg);
    return eta;
}

void adapt(AdaptRule rule, ProposalParams &eta, const FlipRecord &flips, double a_fwd, double a_rev,
           std::size_t i, const AdaptConfig &cfg) {
    if (rule == AdaptRule::Individual)
        ia_update(eta, flips, a_fwd, i, cfg);
    else
        rapa_update(eta, flips, a_fwd, a_rev, i, cfg);
}

} // namespace iavs
