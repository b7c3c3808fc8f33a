#include "iavs/model.hpp"

#include "iavs/errors.hpp"

#include <cmath>

namespace iavs {

void PriorSpec::validate() const {
    const double g = std::visit([](const auto &c) { return c.g; }, coef);
    if (!(g > 0.0) || !std::isfinite(g))
        throw ConfigError("g must be positive");
    if (const auto *f = std::get_if<FixedInclusion>(&inclusion)) {
        if (!(f->h > 0.0 && f->h < 1.0))
            throw ConfigError("h must lie in (0, 1)");
    } else {
        const auto &b = std::get<BetaInclusion>(inclusion);
        if (!(b.a > 0.0 && b.b > 0.0) || !std::isfinite(b.a) || !std::isfinite(b.b))
            throw ConfigError("Beta hyperprior parameters must be positive");
    }
}

double PriorSpec::mean_inclusion() const {
    if (const auto *f = std::get_if<FixedInclusion>(&inclusion))
        return f->h;
    const auto &b = std::get<BetaInclusion>(inclusion);
    return b.a / (b.a + b.b);
}

double log_model_prior(std::size_t k, std::size_t p, const InclusionPrior &inclusion) {
    const double kk = static_cast<double>(k);
    const double rest = static_cast<double>(p - k);
    if (const auto *f = std::get_if<FixedInclusion>(&inclusion))
        return kk * std::log(f->h) + rest * std::log1p(-f->h);
    // B(a + k, b + p - k) / B(a, b) through log-Gamma differences.
    const auto &b = std::get<BetaInclusion>(inclusion);
    return std::lgamma(b.a + kk) + std::lgamma(b.b + rest) - std::lgamma(b.a + b.b + static_cast<double>(p)) -
           (std::lgamma(b.a) + std::lgamma(b.b) - std::lgamma(b.a + b.b));
}

double log_model_prior(const ModelIndicator &gamma, const PriorSpec &prior, std::size_t p) {
    return log_model_prior(gamma.size(), p, prior.inclusion);
}

namespace {

struct Selected {
    Eigen::MatrixXd gram;
    Eigen::VectorXd xty;
};

Selected gather(const ModelIndicator &gamma, const Dataset &data) {
    const auto idx = gamma.indices();
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd Xg(data.X.rows(), k);
    Selected s;
    s.xty.resize(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        Xg.col(c) = data.X.col(static_cast<Eigen::Index>(idx[c]));
        s.xty[c] = data.xty[static_cast<Eigen::Index>(idx[c])];
    }
    s.gram = Eigen::MatrixXd::Zero(k, k);
    s.gram.selfadjointView<Eigen::Lower>().rankUpdate(Xg.transpose());
    s.gram.triangularView<Eigen::StrictlyUpper>() = s.gram.transpose();
    return s;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd> &llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

} // namespace

double log_marginal_likelihood(const ModelIndicator &gamma, const Dataset &data, const PriorSpec &prior) {
    const double residual_power = 0.5 * static_cast<double>(data.n() - 1);
    const std::size_t k = gamma.size();
    if (k == 0)
        return -residual_power * std::log(data.yty);

    auto sel = gather(gamma, data);
    const double kk = static_cast<double>(k);

    if (const auto *gp = std::get_if<GPrior>(&prior.coef)) {
        if (k >= data.n())
            throw RankDeficient("g-prior needs fewer selected variables than observations");
        Eigen::LLT<Eigen::MatrixXd> llt(sel.gram);
        if (llt.info() != Eigen::Success)
            throw RankDeficient("selected columns are collinear");
        const auto &L = llt.matrixLLT();
        for (Eigen::Index c = 0; c < L.rows(); ++c) {
            if (L(c, c) * L(c, c) <= 1e-10 * sel.gram(c, c))
                throw RankDeficient("selected columns are collinear");
        }
        const Eigen::VectorXd z = llt.matrixL().solve(sel.xty);
        const double S = data.yty - gp->g / (1.0 + gp->g) * z.squaredNorm();
        if (!(S > 0.0))
            throw NumericalFailure("non-positive residual sum of squares");
        return -0.5 * kk * std::log1p(gp->g) - residual_power * std::log(S);
    }

    const double g = std::get<RidgePrior>(prior.coef).g;
    Eigen::MatrixXd lambda = sel.gram;
    lambda.diagonal().array() += 1.0 / g;
    Eigen::LLT<Eigen::MatrixXd> llt(lambda);
    if (llt.info() != Eigen::Success) {
        lambda.diagonal().array() += 1e-10 * lambda.trace() / kk;
        llt.compute(lambda);
        if (llt.info() != Eigen::Success)
            throw NumericalFailure("Cholesky factorisation failed after jitter");
    }
    const Eigen::VectorXd z = llt.matrixL().solve(sel.xty);
    const double S = data.yty - z.squaredNorm();
    if (!(S > 0.0))
        throw NumericalFailure("non-positive residual sum of squares");
    return -0.5 * kk * std::log(g) - 0.5 * log_det_from_llt(llt) - residual_power * std::log(S);
}

LogKernelCache::LogKernelCache(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0)
        throw ConfigError("cache capacity must be positive");
}

const double *LogKernelCache::find(const Hash128 &key) {
    auto it = index_.find(key);
    if (it == index_.end()) {
        ++misses_;
        return nullptr;
    }
    ++hits_;
    order_.splice(order_.begin(), order_, it->second);
    return &it->second->value;
}

void LogKernelCache::insert(const Hash128 &key, double value) {
    auto it = index_.find(key);
    if (it != index_.end()) {
        it->second->value = value;
        order_.splice(order_.begin(), order_, it->second);
        return;
    }
    if (index_.size() >= capacity_) {
        index_.erase(order_.back().key);
        order_.pop_back();
    }
    order_.push_front({key, value});
    index_.emplace(key, order_.begin());
}

std::size_t LogKernelCache::approx_bytes() const {
    // list node (two pointers + entry) and hash node (next pointer, key, iterator, cached hash)
    constexpr std::size_t list_node = 2 * sizeof(void *) + sizeof(Entry);
    constexpr std::size_t map_node = sizeof(void *) + sizeof(Hash128) + sizeof(void *) + sizeof(std::size_t);
    return index_.size() * (list_node + map_node) + index_.bucket_count() * sizeof(void *);
}

void LogKernelCache::clear() {
    order_.clear();
    index_.clear();
}

double log_posterior_kernel(const ModelIndicator &gamma, const Dataset &data, const PriorSpec &prior,
                            LogKernelCache &cache) {
    const auto key = gamma.hash();
    double ml;
    if (const double *hit = cache.find(key)) {
        ml = *hit;
    } else {
        ml = log_marginal_likelihood(gamma, data, prior);
        cache.insert(key, ml);
    }
    return ml + log_model_prior(gamma, prior, data.p());
}

Model::Model(std::shared_ptr<const Dataset> data, PriorSpec prior, std::size_t cache_capacity)
    : data_(std::move(data)), prior_(prior), cache_(cache_capacity) {
    if (!data_)
        throw DataError("model needs a dataset");
    prior_.validate();
}

double Model::log_marginal(const ModelIndicator &gamma) {
    const double v = log_marginal_or_zero_mass(gamma);
    if (v == -std::numeric_limits<double>::infinity())
        throw RankDeficient("marginal likelihood undefined for this model under the g-prior");
    return v;
}

double Model::log_marginal_or_zero_mass(const ModelIndicator &gamma) {
    if (gamma.p() != data_->p())
        throw DimensionError("model indicator length does not match the data");
    const auto key = gamma.hash();
    if (const double *hit = cache_.find(key))
        return *hit;
    double v;
    ++evaluations_;
    try {
        v = log_marginal_likelihood(gamma, *data_, prior_);
    } catch (const RankDeficient &) {
        v = -std::numeric_limits<double>::infinity();
    }
    cache_.insert(key, v);
    return v;
}

double Model::log_prior(const ModelIndicator &gamma) const { return log_model_prior(gamma, prior_, data_->p()); }

} // namespace iavs
