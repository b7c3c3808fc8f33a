#include "iavs/proposal.hpp"

#include "iavs/errors.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>

namespace iavs {

namespace {

std::uint64_t threshold53(double x) { return static_cast<std::uint64_t>(std::ceil(std::ldexp(x, 53))); }

} // namespace

ProposalParams::ProposalParams(std::vector<double> add, std::vector<double> del, double epsilon)
    : add_(std::move(add)), del_(std::move(del)), epsilon_(epsilon) {
    if (!(epsilon_ >= 0.0 && epsilon_ < 0.5))
        throw ConfigError("epsilon must lie in [0, 1/2)");
    if (add_.size() != del_.size())
        throw DimensionError("A and D must have the same length");
    add_logit_.resize(add_.size());
    del_logit_.resize(del_.size());
    add_thr_.resize(add_.size());
    del_thr_.resize(del_.size());
    for (std::size_t j = 0; j < add_.size(); ++j) {
        if (!(add_[j] > epsilon_ && add_[j] < 1.0 - epsilon_ && del_[j] > epsilon_ && del_[j] < 1.0 - epsilon_))
            throw InitOutOfRange("proposal probabilities must lie in (eps, 1 - eps)");
        add_logit_[j] = logit(add_[j]);
        del_logit_[j] = logit(del_[j]);
        add_thr_[j] = threshold53(add_[j]);
        del_thr_[j] = threshold53(del_[j]);
    }
}

double ProposalParams::logit(double x) const { return std::log((x - epsilon_) / (1.0 - x - epsilon_)); }

double ProposalParams::inverse_logit(double l) const {
    l = std::clamp(l, -logit_limit, logit_limit);
    return epsilon_ + (1.0 - 2.0 * epsilon_) / (1.0 + std::exp(-l));
}

void ProposalParams::shift_add_logit(std::size_t j, double delta) {
    if (delta == 0.0)
        return;
    add_logit_[j] = std::clamp(add_logit_[j] + delta, -logit_limit, logit_limit);
    add_[j] = inverse_logit(add_logit_[j]);
    add_thr_[j] = threshold53(add_[j]);
}

void ProposalParams::shift_del_logit(std::size_t j, double delta) {
    if (delta == 0.0)
        return;
    del_logit_[j] = std::clamp(del_logit_[j] + delta, -logit_limit, logit_limit);
    del_[j] = inverse_logit(del_logit_[j]);
    del_thr_[j] = threshold53(del_[j]);
}

FlipRecord flips_between(const ModelIndicator &from, const ModelIndicator &to) {
    if (from.p() != to.p())
        throw DimensionError("model lengths differ");
    FlipRecord f;
    const auto a = from.words();
    const auto b = to.words();
    for (std::size_t k = 0; k < a.size(); ++k) {
        auto diff = a[k] ^ b[k];
        while (diff) {
            const std::size_t j = k * 64 + static_cast<std::size_t>(std::countr_zero(diff));
            if (from.test(j))
                f.del_flips.push_back(j);
            else
                f.add_flips.push_back(j);
            diff &= diff - 1;
        }
    }
    return f;
}

std::pair<ModelIndicator, FlipRecord> sample_proposal(const ModelIndicator &gamma, const ProposalParams &eta,
                                                      Rng &rng) {
    const std::size_t p = gamma.p();
    if (eta.p() != p)
        throw DimensionError("proposal parameters do not match the model length");
    ModelIndicator next = gamma;
    FlipRecord flips;
    const std::uint64_t *add = eta.add_thresholds().data();
    const std::uint64_t *del = eta.del_thresholds().data();
    const auto words = gamma.words();
    for (std::size_t k = 0; k < words.size(); ++k) {
        const std::uint64_t w = words[k];
        const std::size_t end = std::min(p, (k + 1) * 64);
        for (std::size_t j = k * 64; j < end; ++j) {
            const bool in = (w >> (j & 63)) & 1U;
            const std::uint64_t thr = in ? del[j] : add[j];
            if ((rng() >> 11) < thr) {
                next.flip(j);
                (in ? flips.del_flips : flips.add_flips).push_back(j);
            }
        }
    }
    return {std::move(next), std::move(flips)};
}

double log_proposal_ratio(const FlipRecord &flips, const ProposalParams &eta) {
    double r = 0.0;
    for (auto j : flips.add_flips)
        r += std::log(eta.del(j) / eta.add(j));
    for (auto j : flips.del_flips)
        r += std::log(eta.add(j) / eta.del(j));
    return r;
}

Acceptance acceptance_probability(double log_kernel_current, double log_kernel_proposed, const FlipRecord &flips,
                                  const ProposalParams &eta) {
    if (!flips.any_flip())
        return {1.0, 1.0};
    if (log_kernel_proposed == -std::numeric_limits<double>::infinity())
        return {0.0, 1.0};
    const double log_ratio = log_kernel_proposed - log_kernel_current + log_proposal_ratio(flips, eta);
    Acceptance a;
    a.forward = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
    a.reverse = log_ratio <= 0.0 ? 1.0 : std::exp(-log_ratio);
    return a;
}

} // namespace iavs
