#include "iavs/diagnostics.hpp"
#include "iavs/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace iavs {

namespace {

double zero_mass_marginal(std::uint64_t mask, const Dataset &data, const PriorSpec &prior) {
    try {
        return log_marginal_likelihood(ModelIndicator::from_mask(data.p(), mask), data, prior);
    } catch (const RankDeficient &) {
        return -std::numeric_limits<double>::infinity();
    }
}

Enumeration prepare(const Dataset &data, const PriorSpec &prior, std::size_t limit) {
    prior.validate();
    const std::size_t p = data.p();
    if (p > limit || p > 30)
        throw TooManyVariables("enumeration limited to p <= " + std::to_string(std::min<std::size_t>(limit, 30)) +
                               " (got p = " + std::to_string(p) + ")");
    Enumeration e;
    e.p = p;
    const std::size_t models = std::size_t{1} << p;
    e.log_marginal.resize(models);
    e.log_prior.resize(models);
    return e;
}

void finish(Enumeration &e, const PriorSpec &prior) {
    const std::size_t models = e.log_marginal.size();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < models; ++m) {
        e.log_prior[m] = log_model_prior(static_cast<std::size_t>(std::popcount(m)), e.p, prior.inclusion);
        mx = std::max(mx, e.log_kernel(m));
    }
    double s = 0.0;
    for (std::size_t m = 0; m < models; ++m)
        s += std::exp(e.log_kernel(m) - mx);
    e.log_normalizer = mx + std::log(s);
    e.probabilities.resize(models);
    e.gold.theta.assign(e.p, 0.0);
    e.gold.source = GoldSource::Enumeration;
    e.mean_model_size = 0.0;
    for (std::size_t m = 0; m < models; ++m) {
        const double pr = std::exp(e.log_kernel(m) - e.log_normalizer);
        e.probabilities[m] = pr;
        e.mean_model_size += pr * std::popcount(m);
        for (auto bits = m; bits; bits &= bits - 1)
            e.gold.theta[static_cast<std::size_t>(std::countr_zero(bits))] += pr;
    }
}

} // namespace

Enumeration enumerate_posterior_serial(const Dataset &data, const PriorSpec &prior, std::size_t limit) {
    Enumeration e = prepare(data, prior, limit);
    const std::size_t models = e.log_marginal.size();
    std::uint64_t mask = 0;
    e.log_marginal[0] = zero_mass_marginal(0, data, prior);
    for (std::size_t i = 1; i < models; ++i) {
        mask ^= std::uint64_t{1} << std::countr_zero(i);
        e.log_marginal[mask] = zero_mass_marginal(mask, data, prior);
    }
    finish(e, prior);
    return e;
}

Enumeration enumerate_posterior(const Dataset &data, const PriorSpec &prior, std::size_t limit) {
    Enumeration e = prepare(data, prior, limit);
    const auto models = static_cast<std::int64_t>(e.log_marginal.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t m = 0; m < models; ++m)
        e.log_marginal[static_cast<std::size_t>(m)] = zero_mass_marginal(static_cast<std::uint64_t>(m), data, prior);
    finish(e, prior);
    return e;
}

PosteriorSummary Enumeration::summary(std::size_t top) const {
    PosteriorSummary s;
    s.pips = gold.theta;
    s.mean_model_size = mean_model_size;
    std::vector<std::size_t> order(probabilities.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t keep = std::min(top, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (probabilities[a] != probabilities[b])
                              return probabilities[a] > probabilities[b];
                          return a < b;
                      });
    for (std::size_t r = 0; r < keep; ++r)
        s.top_models.emplace_back(ModelIndicator::from_mask(p, order[r]), probabilities[order[r]]);
    return s;
}

} // namespace iavs
