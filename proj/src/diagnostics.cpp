#include "iavs/diagnostics.hpp"

#include "iavs/errors.hpp"
#include "iavs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iavs {

PosteriorAccumulator::PosteriorAccumulator(std::size_t p, bool track_models)
    : inclusion_counts_(p, 0), track_models_(track_models) {}

void PosteriorAccumulator::add(const ModelIndicator &gamma) {
    for (auto j : gamma.indices())
        ++inclusion_counts_[j];
    size_total_ += gamma.size();
    ++count_;
    if (track_models_)
        ++model_counts_[gamma];
}

void PosteriorAccumulator::merge(const PosteriorAccumulator &other) {
    if (inclusion_counts_.empty())
        inclusion_counts_.assign(other.inclusion_counts_.size(), 0);
    for (std::size_t j = 0; j < inclusion_counts_.size(); ++j)
        inclusion_counts_[j] += other.inclusion_counts_[j];
    size_total_ += other.size_total_;
    count_ += other.count_;
    track_models_ = track_models_ && other.track_models_;
    if (track_models_) {
        for (const auto &[m, c] : other.model_counts_)
            model_counts_[m] += c;
    } else {
        model_counts_.clear();
    }
}

namespace {

bool words_less(const ModelIndicator &a, const ModelIndicator &b) {
    const auto wa = a.words();
    const auto wb = b.words();
    return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
}

} // namespace

PosteriorSummary PosteriorAccumulator::summary(std::size_t top) const {
    PosteriorSummary s;
    s.sample_count = count_;
    s.pips.assign(inclusion_counts_.size(), 0.0);
    if (count_ == 0)
        return s;
    const double n = static_cast<double>(count_);
    for (std::size_t j = 0; j < inclusion_counts_.size(); ++j)
        s.pips[j] = static_cast<double>(inclusion_counts_[j]) / n;
    s.mean_model_size = static_cast<double>(size_total_) / n;

    std::vector<std::pair<const ModelIndicator *, std::size_t>> models;
    models.reserve(model_counts_.size());
    for (const auto &[m, c] : model_counts_)
        models.emplace_back(&m, c);
    const std::size_t keep = std::min(top, models.size());
    std::partial_sort(models.begin(), models.begin() + static_cast<std::ptrdiff_t>(keep), models.end(),
                      [](const auto &a, const auto &b) {
                          if (a.second != b.second)
                              return a.second > b.second;
                          return words_less(*a.first, *b.first);
                      });
    for (std::size_t r = 0; r < keep; ++r)
        s.top_models.emplace_back(*models[r].first, static_cast<double>(models[r].second) / n);
    return s;
}

PosteriorSummary estimate_pips(std::span<const ModelIndicator> trace, std::size_t burnin, std::size_t top) {
    if (trace.size() <= burnin)
        throw EmptyTrace("no states after burn-in");
    PosteriorAccumulator acc(trace.front().p(), true);
    for (std::size_t i = burnin; i < trace.size(); ++i)
        acc.add(trace[i]);
    return acc.summary(top);
}

MutationRate mutation_rate(std::span<const StepRecord> records, std::size_t burnin) {
    MutationRate m;
    double realized = 0.0;
    double rb = 0.0;
    for (const auto &r : records) {
        if (r.iteration <= burnin)
            continue;
        ++m.count;
        realized += r.moved() ? 1.0 : 0.0;
        rb += r.proposed_change ? r.a_fwd : 0.0;
    }
    if (m.count == 0)
        throw EmptyTrace("no step records after burn-in");
    m.realized = realized / static_cast<double>(m.count);
    m.rao_blackwell = rb / static_cast<double>(m.count);
    return m;
}

EssResult ess(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 10)
        throw DataError("ESS needs at least 10 values");
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = series[i] - mean;
    const double gamma0 = kernels::autocovariance(x, 0);
    const double scale = std::max(1.0, std::abs(mean));
    if (!(gamma0 > 1e-24 * scale * scale))
        return {static_cast<double>(n), true};

    // Initial positive sequence: sum pairs rho_{2m} + rho_{2m+1} while positive.
    double tau = -1.0;
    for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
        const double pair =
            (kernels::autocovariance(x, lag) + kernels::autocovariance(x, lag + 1)) / gamma0;
        if (pair <= 0.0)
            break;
        tau += 2.0 * pair;
    }
    tau = std::max(tau, 1.0 / static_cast<double>(n));
    return {static_cast<double>(n) / tau, false};
}

double wmse(const std::vector<std::vector<double>> &estimates, const GoldStandard &gold) {
    const double total = std::accumulate(gold.theta.begin(), gold.theta.end(), 0.0);
    if (!(total > 0.0))
        throw AllZeroGold("gold-standard PIPs are all zero");
    double out = 0.0;
    for (const auto &est : estimates) {
        if (est.size() != gold.theta.size())
            throw DimensionError("estimate length does not match the gold standard");
        for (std::size_t j = 0; j < est.size(); ++j) {
            const double d = est[j] - gold.theta[j];
            out += gold.theta[j] / total * d * d;
        }
    }
    return out;
}

std::vector<AdRatioRow> ad_ratio_report(const ProposalParams &eta, const GoldStandard &gold) {
    if (eta.p() != gold.theta.size())
        throw DimensionError("proposal parameters and PIPs differ in length");
    std::vector<AdRatioRow> rows;
    for (std::size_t j = 0; j < eta.p(); ++j) {
        const double psi = gold.theta[j];
        if (!(psi > 0.05 && psi < 0.95))
            continue;
        AdRatioRow r;
        r.j = j;
        r.ad_ratio = eta.add(j) / eta.del(j);
        r.pip_odds = psi / (1.0 - psi);
        r.log_discrepancy = std::log(r.ad_ratio) - std::log(r.pip_odds);
        rows.push_back(r);
    }
    return rows;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DimensionError("correlation needs two equal-length series of length >= 2");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace iavs
