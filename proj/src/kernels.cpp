#include "iavs/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

namespace iavs::kernels {

namespace {
// Fixed block count keeps reductions independent of the thread count.
constexpr std::size_t reduction_blocks = 64;
} // namespace

Eigen::VectorXd center_columns(Eigen::MatrixXd &X) {
    const Eigen::Index p = X.cols();
    Eigen::VectorXd means(p);
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < p; ++j) {
        means[j] = X.col(j).mean();
        X.col(j).array() -= means[j];
    }
    return means;
}

Eigen::VectorXd cross_product(const Eigen::MatrixXd &X, const Eigen::VectorXd &v) {
    const Eigen::Index p = X.cols();
    Eigen::VectorXd out(p);
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < p; ++j)
        out[j] = X.col(j).dot(v);
    return out;
}

double autocovariance(std::span<const double> x, std::size_t lag) {
    const std::size_t n = x.size();
    if (lag >= n)
        return 0.0;
    const std::size_t terms = n - lag;
    const std::size_t block = (terms + reduction_blocks - 1) / reduction_blocks;
    std::vector<double> partial(reduction_blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < reduction_blocks; ++b) {
        const std::size_t lo = b * block;
        const std::size_t hi = std::min(terms, lo + block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            s += x[i] * x[i + lag];
        partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial)
        total += s;
    return total / static_cast<double>(n);
}

namespace serial {

Eigen::VectorXd center_columns(Eigen::MatrixXd &X) {
    Eigen::VectorXd means(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            s += X(i, j);
        means[j] = s / static_cast<double>(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            X(i, j) -= means[j];
    }
    return means;
}

Eigen::VectorXd cross_product(const Eigen::MatrixXd &X, const Eigen::VectorXd &v) {
    Eigen::VectorXd out(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            s += X(i, j) * v[i];
        out[j] = s;
    }
    return out;
}

double autocovariance(std::span<const double> x, std::size_t lag) {
    const std::size_t n = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
        s += x[i] * x[i + lag];
    return s / static_cast<double>(n);
}

} // namespace serial
} // namespace iavs::kernels
