#pragma once

#include "dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace iavs {

struct SyntheticSpec {
    std::size_t n = 60;
    std::size_t p = 12;
    std::size_t signals = 3;
    double correlation = 0.0; ///< equicorrelation between covariates
    double noise_sd = 1.0;
    double coefficient = 1.0; ///< value of every non-zero coefficient
    std::uint64_t seed = 1;
};

struct SyntheticData {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    std::vector<std::string> names;
    std::vector<double> beta;
    std::vector<std::size_t> signal_indices;

    Dataset dataset(bool standardize = false) const;
};

/// Equicorrelated Gaussian design with `signals` non-zero coefficients spread
/// evenly over the columns. Throws DimensionError on invalid sizes.
SyntheticData generate_synthetic(const SyntheticSpec &spec);

/// Writes "y,x1,...,xp" and a truth file "j,name,beta". Write-then-rename.
void write_synthetic(const SyntheticData &data, const std::filesystem::path &csv,
                     const std::filesystem::path &truth);

} // namespace iavs
