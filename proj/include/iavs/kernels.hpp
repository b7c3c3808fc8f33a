#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>

// Data-parallel inner loops. Each OpenMP kernel has a serial reference with
// the same contract; results are independent of the thread count.
namespace iavs::kernels {

/// Subtracts column means in place; returns the means.
Eigen::VectorXd center_columns(Eigen::MatrixXd &X);
/// X' v
Eigen::VectorXd cross_product(const Eigen::MatrixXd &X, const Eigen::VectorXd &v);
/// sum_{i} x_i x_{i+lag} / N for a centred series.
double autocovariance(std::span<const double> centered, std::size_t lag);

namespace serial {
Eigen::VectorXd center_columns(Eigen::MatrixXd &X);
Eigen::VectorXd cross_product(const Eigen::MatrixXd &X, const Eigen::VectorXd &v);
double autocovariance(std::span<const double> centered, std::size_t lag);
} // namespace serial

} // namespace iavs::kernels
