#pragma once

#include "dataset.hpp"
#include "model_indicator.hpp"

#include <cstddef>
#include <limits>
#include <list>
#include <memory>
#include <unordered_map>
#include <variant>

namespace iavs {

/// V_gamma = g I
struct RidgePrior {
    double g = 100.0;
};

/// V_gamma = g (X_gamma' X_gamma)^{-1}
struct GPrior {
    double g = 100.0;
};

using CoefficientPrior = std::variant<RidgePrior, GPrior>;

struct FixedInclusion {
    double h = 0.5;
};

/// h ~ Be(a, b), integrated out of the model prior.
struct BetaInclusion {
    double a = 1.0;
    double b = 1.0;
};

using InclusionPrior = std::variant<FixedInclusion, BetaInclusion>;

struct PriorSpec {
    CoefficientPrior coef = RidgePrior{};
    InclusionPrior inclusion = FixedInclusion{};

    void validate() const;
    /// Prior probability that any one variable is included (h, or a/(a+b)).
    double mean_inclusion() const;
};

double log_model_prior(std::size_t model_size, std::size_t p, const InclusionPrior &inclusion);
double log_model_prior(const ModelIndicator &gamma, const PriorSpec &prior, std::size_t p);

/// Log marginal likelihood up to a constant shared by every model. The empty
/// model evaluates to -(n-1)/2 log(y'y).
///
/// Throws RankDeficient for a g-prior on collinear columns (or p_gamma >= n-1)
/// and NumericalFailure when the ridge factorisation fails after one jitter.
double log_marginal_likelihood(const ModelIndicator &gamma, const Dataset &data, const PriorSpec &prior);

/// Bounded LRU map from model hash to log marginal likelihood.
class LogKernelCache {
  public:
    static constexpr std::size_t default_capacity = std::size_t{1} << 20;

    explicit LogKernelCache(std::size_t capacity = default_capacity);

    const double *find(const Hash128 &key);
    void insert(const Hash128 &key, double value);

    std::size_t size() const { return index_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    /// Rough upper bound on heap bytes held by the entries.
    std::size_t approx_bytes() const;
    void clear();

  private:
    struct Entry {
        Hash128 key;
        double value;
    };
    std::size_t capacity_;
    std::list<Entry> order_;
    std::unordered_map<Hash128, std::list<Entry>::iterator> index_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

/// Cached log posterior kernel. The cache holds the marginal likelihood only so
/// tempered targets t log p(y|g) + log p(g) can share it.
double log_posterior_kernel(const ModelIndicator &gamma, const Dataset &data, const PriorSpec &prior,
                            LogKernelCache &cache);

/// The posterior target over model space. Not thread-safe: use one per worker.
class Model {
  public:
    Model(std::shared_ptr<const Dataset> data, PriorSpec prior,
          std::size_t cache_capacity = LogKernelCache::default_capacity);

    const Dataset &data() const { return *data_; }
    std::shared_ptr<const Dataset> data_ptr() const { return data_; }
    const PriorSpec &prior() const { return prior_; }
    std::size_t p() const { return data_->p(); }
    std::size_t n() const { return data_->n(); }

    double log_marginal(const ModelIndicator &gamma);
    double log_prior(const ModelIndicator &gamma) const;
    double log_posterior_kernel(const ModelIndicator &gamma) { return log_marginal(gamma) + log_prior(gamma); }

    /// Like log_marginal, but models with no defined g-prior marginal are
    /// given -inf (zero posterior mass) instead of throwing.
    double log_marginal_or_zero_mass(const ModelIndicator &gamma);

    const LogKernelCache &cache() const { return cache_; }
    std::size_t evaluations() const { return evaluations_; }

  private:
    std::shared_ptr<const Dataset> data_;
    PriorSpec prior_;
    LogKernelCache cache_;
    std::size_t evaluations_ = 0;
};

/// t * log_ml + log_prior, with -inf for models outside the support at any t.
inline double tempered_kernel(double log_ml, double log_prior, double t) {
    if (log_ml == -std::numeric_limits<double>::infinity())
        return log_ml;
    return t * log_ml + log_prior;
}

} // namespace iavs
