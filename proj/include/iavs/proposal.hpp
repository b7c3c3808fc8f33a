#pragma once

#include "model_indicator.hpp"
#include "rng.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace iavs {

/// Per-variable add (A) and delete (D) probabilities of the product-Bernoulli
/// proposal. Each probability is stored with its eps-logit
/// l(x) = log((x - eps) / (1 - x - eps)) so adaptation works on the logit scale
/// without round-trip error. Values always lie strictly inside (eps, 1 - eps).
class ProposalParams {
  public:
    /// Logits are clamped to +-logit_limit so the probabilities stay strictly
    /// inside the open interval in floating point.
    static constexpr double logit_limit = 30.0;

    ProposalParams() = default;
    ProposalParams(std::vector<double> add, std::vector<double> del, double epsilon);

    std::size_t p() const { return add_.size(); }
    double epsilon() const { return epsilon_; }

    double add(std::size_t j) const { return add_[j]; }
    double del(std::size_t j) const { return del_[j]; }
    double add_logit(std::size_t j) const { return add_logit_[j]; }
    double del_logit(std::size_t j) const { return del_logit_[j]; }
    const std::vector<double> &add_values() const { return add_; }
    const std::vector<double> &del_values() const { return del_; }
    /// ceil(x * 2^53): a 53-bit draw k satisfies k * 2^-53 < x iff k < threshold.
    const std::vector<std::uint64_t> &add_thresholds() const { return add_thr_; }
    const std::vector<std::uint64_t> &del_thresholds() const { return del_thr_; }

    /// A zero shift leaves the stored probability bit-for-bit unchanged.
    void shift_add_logit(std::size_t j, double delta);
    void shift_del_logit(std::size_t j, double delta);

    double logit(double x) const;
    double inverse_logit(double l) const;

    friend bool operator==(const ProposalParams &, const ProposalParams &) = default;

  private:
    std::vector<double> add_;
    std::vector<double> del_;
    std::vector<double> add_logit_;
    std::vector<double> del_logit_;
    std::vector<std::uint64_t> add_thr_;
    std::vector<std::uint64_t> del_thr_;
    double epsilon_ = 0.0;
};

/// Coordinates where a proposal differs from the current model.
struct FlipRecord {
    std::vector<std::size_t> add_flips; ///< gamma_j = 0, gamma'_j = 1
    std::vector<std::size_t> del_flips; ///< gamma_j = 1, gamma'_j = 0

    bool any_flip() const { return !add_flips.empty() || !del_flips.empty(); }
    std::size_t count() const { return add_flips.size() + del_flips.size(); }
};

FlipRecord flips_between(const ModelIndicator &from, const ModelIndicator &to);

/// Flips each coordinate independently with probability A_j (if excluded) or
/// D_j (if included). O(p) per draw.
std::pair<ModelIndicator, FlipRecord> sample_proposal(const ModelIndicator &gamma, const ProposalParams &eta,
                                                      Rng &rng);

/// log q(gamma', gamma) - log q(gamma, gamma'); unflipped coordinates cancel.
double log_proposal_ratio(const FlipRecord &flips, const ProposalParams &eta);

struct Acceptance {
    double forward = 1.0; ///< a(gamma, gamma')
    double reverse = 1.0; ///< a(gamma', gamma), from the same quantities
};

Acceptance acceptance_probability(double log_kernel_current, double log_kernel_proposed, const FlipRecord &flips,
                                  const ProposalParams &eta);

inline int mutation_indicator(const FlipRecord &flips) { return flips.any_flip() ? 1 : 0; }

} // namespace iavs
