#pragma once

#include <cstddef>

namespace iavs {

struct StepRecord {
    std::size_t iteration = 0; ///< 1-based, per chain
    std::size_t chain = 0;
    double a_fwd = 1.0;
    double a_rev = 1.0;
    bool proposed_change = false; ///< C(gamma, gamma')
    bool accepted = false;
    std::size_t proposed_changes = 0;
    std::size_t model_size = 0; ///< after the step
    double log_kernel = 0.0;    ///< after the step

    /// The state actually changed on this step.
    bool moved() const { return proposed_change && accepted; }
};

} // namespace iavs
