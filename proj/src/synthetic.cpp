#include "iavs/synthetic.hpp"

#include "iavs/errors.hpp"
#include "iavs/rng.hpp"
#include "iavs/run.hpp"

#include <charconv>
#include <cmath>
#include <random>

namespace iavs {

Dataset SyntheticData::dataset(bool standardize) const { return make_dataset(y, X, names, standardize); }

SyntheticData generate_synthetic(const SyntheticSpec &spec) {
    if (spec.n < 3 || spec.p < 1)
        throw DimensionError("synthetic data need n >= 3 and p >= 1");
    if (spec.signals > spec.p)
        throw DimensionError("more signals than variables");
    if (!(std::abs(spec.correlation) < 1.0))
        throw DimensionError("correlation must satisfy |rho| < 1");
    const double pp = static_cast<double>(spec.p);
    if (1.0 + (pp - 1.0) * spec.correlation <= 0.0)
        throw DimensionError("negative equicorrelation too strong for this p");
    if (!(spec.noise_sd >= 0.0))
        throw DimensionError("noise standard deviation must be non-negative");

    Rng rng(derive_seed(spec.seed, 0));
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(spec.n);
    const auto p = static_cast<Eigen::Index>(spec.p);

    // x = sqrt(1 - rho) e + c (1'e) 1 has covariance (1 - rho) I + rho 11'.
    const double a = std::sqrt(1.0 - spec.correlation);
    const double c = (-a + std::sqrt(a * a + pp * spec.correlation)) / pp;

    SyntheticData d;
    d.X.resize(n, p);
    Eigen::VectorXd e(p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j)
            e[j] = normal(rng);
        const double common = c * e.sum();
        d.X.row(i) = (a * e.array() + common).matrix().transpose();
    }

    d.beta.assign(spec.p, 0.0);
    for (std::size_t s = 0; s < spec.signals; ++s) {
        const std::size_t j = s * spec.p / spec.signals;
        d.signal_indices.push_back(j);
        d.beta[j] = spec.coefficient;
    }
    const Eigen::Map<const Eigen::VectorXd> beta(d.beta.data(), p);
    d.y = d.X * beta;
    for (Eigen::Index i = 0; i < n; ++i)
        d.y[i] += spec.noise_sd * normal(rng);
    for (Eigen::Index j = 0; j < p; ++j)
        d.names.push_back("x" + std::to_string(j + 1));
    return d;
}

namespace {

void append_double(std::string &out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

} // namespace

void write_synthetic(const SyntheticData &data, const std::filesystem::path &csv,
                     const std::filesystem::path &truth) {
    std::string body = "y";
    for (const auto &name : data.names)
        body += "," + name;
    body += '\n';
    for (Eigen::Index i = 0; i < data.y.size(); ++i) {
        append_double(body, data.y[i]);
        for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
            body += ',';
            append_double(body, data.X(i, j));
        }
        body += '\n';
    }
    write_file_atomic(csv, body);

    std::string t = "j,name,beta\n";
    for (std::size_t j = 0; j < data.beta.size(); ++j) {
        t += std::to_string(j) + "," + data.names[j] + ",";
        append_double(t, data.beta[j]);
        t += '\n';
    }
    write_file_atomic(truth, t);
}

} // namespace iavs
