#pragma once

#include "dataset.hpp"
#include "model.hpp"
#include "model_indicator.hpp"
#include "proposal.hpp"
#include "records.hpp"

#include <cstddef>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace iavs {

struct PosteriorSummary {
    std::vector<double> pips;
    double mean_model_size = 0.0;
    /// Descending by probability.
    std::vector<std::pair<ModelIndicator, double>> top_models;
    std::size_t sample_count = 0;
};

inline constexpr std::size_t default_top_models = 13;

/// Streaming version of estimate_pips, used by the samplers so traces need not
/// be stored. Model frequencies are only tracked when requested.
class PosteriorAccumulator {
  public:
    PosteriorAccumulator() = default;
    PosteriorAccumulator(std::size_t p, bool track_models);

    void add(const ModelIndicator &gamma);
    void merge(const PosteriorAccumulator &other);
    PosteriorSummary summary(std::size_t top = default_top_models) const;
    std::size_t count() const { return count_; }

  private:
    std::vector<std::size_t> inclusion_counts_;
    std::size_t size_total_ = 0;
    std::size_t count_ = 0;
    bool track_models_ = false;
    std::unordered_map<ModelIndicator, std::size_t> model_counts_;
};

/// PIPs, mean size and top models from the states after the first `burnin`.
PosteriorSummary estimate_pips(std::span<const ModelIndicator> trace, std::size_t burnin,
                               std::size_t top = default_top_models);

struct MutationRate {
    double realized = 0.0;        ///< fraction of steps where the state changed
    double rao_blackwell = 0.0;   ///< mean of C * a_fwd
    std::size_t count = 0;
};

/// Uses records with iteration > burnin. Throws EmptyTrace if none remain.
MutationRate mutation_rate(std::span<const StepRecord> records, std::size_t burnin);

struct EssResult {
    double value = 0.0;
    bool degenerate = false; ///< zero-variance series; value is then N
};

/// N / (1 + 2 sum rho_k), autocorrelations truncated by Geyer's initial
/// positive sequence rule. Requires at least 10 values.
EssResult ess(std::span<const double> series);

enum class GoldSource { Enumeration, LongRun };

struct GoldStandard {
    std::vector<double> theta;
    GoldSource source = GoldSource::Enumeration;
};

/// sum_i sum_j w_j (est_ij - theta_j)^2 with w proportional to theta.
double wmse(const std::vector<std::vector<double>> &estimates, const GoldStandard &gold);

struct Enumeration {
    std::size_t p = 0;
    std::vector<double> log_marginal; ///< indexed by bit mask, bit j = variable j
    std::vector<double> log_prior;
    std::vector<double> probabilities;
    double log_normalizer = 0.0; ///< log sum_gamma p(y|gamma) p(gamma)
    double mean_model_size = 0.0;
    GoldStandard gold;

    double log_kernel(std::size_t mask, double t = 1.0) const {
        return tempered_kernel(log_marginal[mask], log_prior[mask], t);
    }
    PosteriorSummary summary(std::size_t top = default_top_models) const;
};

inline constexpr std::size_t default_enumeration_limit = 20;

/// Exhaustive evaluation of all 2^p models, visited in Gray-code order.
Enumeration enumerate_posterior_serial(const Dataset &data, const PriorSpec &prior,
                                       std::size_t limit = default_enumeration_limit);
/// Same table computed with the models split across OpenMP threads.
Enumeration enumerate_posterior(const Dataset &data, const PriorSpec &prior,
                                std::size_t limit = default_enumeration_limit);

struct AdRatioRow {
    std::size_t j = 0;
    double ad_ratio = 0.0;
    double pip_odds = 0.0;
    double log_discrepancy = 0.0; ///< log(A/D) - log(psi / (1 - psi))
};

/// Rows for variables with 0.05 < psi_j < 0.95 only.
std::vector<AdRatioRow> ad_ratio_report(const ProposalParams &eta, const GoldStandard &gold);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

} // namespace iavs
