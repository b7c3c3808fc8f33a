#include "iavs/kernels.hpp"
#include "iavs/rng.hpp"

#include <doctest.h>
#include <omp.h>

#include <random>

using namespace iavs;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    auto rng = make_rng(seed, 0);
    std::normal_distribution<double> z(3.0, 2.0);
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            X(i, j) = z(rng);
    return X;
}

} // namespace

TEST_CASE("centering agrees with the serial reference") {
    Eigen::MatrixXd a = random_matrix(60, 500, 1);
    Eigen::MatrixXd b = a;
    const auto ma = kernels::center_columns(a);
    const auto mb = kernels::serial::center_columns(b);
    CHECK((ma - mb).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(a.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cross product agrees with the serial reference and Eigen") {
    const Eigen::MatrixXd X = random_matrix(60, 2000, 2);
    const Eigen::VectorXd v = random_matrix(60, 1, 3).col(0);
    const auto a = kernels::cross_product(X, v);
    const auto b = kernels::serial::cross_product(X, v);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a - X.transpose() * v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("autocovariance agrees with the serial reference for every thread count") {
    auto rng = make_rng(4, 0);
    std::normal_distribution<double> z;
    std::vector<double> x(100003);
    double prev = 0.0;
    for (auto &v : x) {
        prev = 0.7 * prev + z(rng);
        v = prev;
    }
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(x.size());
    for (auto &v : x)
        v -= mean;

    const int saved = omp_get_max_threads();
    for (std::size_t lag : {0u, 1u, 7u, 500u, 100002u}) {
        const double ref = kernels::serial::autocovariance(x, lag);
        omp_set_num_threads(1);
        const double one = kernels::autocovariance(x, lag);
        omp_set_num_threads(4);
        const double four = kernels::autocovariance(x, lag);
        CHECK(one == four);
        CHECK(one == doctest::Approx(ref).epsilon(1e-12));
    }
    omp_set_num_threads(saved);
    CHECK(kernels::autocovariance(x, x.size()) == 0.0);
    CHECK(kernels::serial::autocovariance(x, 1) == doctest::Approx(0.7 * kernels::serial::autocovariance(x, 0)).epsilon(0.02));
}
