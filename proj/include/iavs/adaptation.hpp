#pragma once

#include "model.hpp"
#include "proposal.hpp"

#include <cstddef>

namespace iavs {

struct AdaptConfig {
    double tau = 0.45;     ///< target mutation rate
    double epsilon = 0.001;
    double lambda = 0.6;   ///< step sizes decay as i^-lambda
    double phi0 = 1.0;     ///< 0 freezes adaptation
    double nu = 1.0;       ///< initial expected number of proposed changes is 2 nu
    double w = 0.5;        ///< reverse-move weight (0 reduces RAPA to IA)

    void validate() const;

    friend bool operator==(const AdaptConfig &, const AdaptConfig &) = default;
};

enum class AdaptRule {
    Individual,          ///< IA
    ReverseAccelerated,  ///< IA-RAPA
};

/// Iteration counter for the step-size schedule. Starts at 1.
class AdaptCounter {
  public:
    std::size_t value() const { return i_; }
    std::size_t next() { return i_++; }
    void reset() { i_ = 1; }

  private:
    std::size_t i_ = 1;
};

double step_size(std::size_t i, const AdaptConfig &cfg);

/// A_j = nu / ((1 - h) p), D_j = nu / (h p). Throws InitOutOfRange when these
/// fall outside (eps, 1 - eps).
ProposalParams init_proposal_params(std::size_t p, double h_effective, const AdaptConfig &cfg);

void ia_update(ProposalParams &eta, const FlipRecord &flips, double a_fwd, std::size_t i, const AdaptConfig &cfg);
void rapa_update(ProposalParams &eta, const FlipRecord &flips, double a_fwd, double a_rev, std::size_t i,
                 const AdaptConfig &cfg);

/// Value-in/value-out forms.
ProposalParams ia_updated(ProposalParams eta, const FlipRecord &flips, double a_fwd, std::size_t i,
                          const AdaptConfig &cfg);
ProposalParams rapa_updated(ProposalParams eta, const FlipRecord &flips, double a_fwd, double a_rev,
                            std::size_t i, const AdaptConfig &cfg);

void adapt(AdaptRule rule, ProposalParams &eta, const FlipRecord &flips, double a_fwd, double a_rev,
           std::size_t i, const AdaptConfig &cfg);

} // namespace iavs
