#pragma once

#include "adaptation.hpp"
#include "diagnostics.hpp"
#include "model.hpp"
#include "proposal.hpp"
#include "records.hpp"
#include "rng.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace iavs {

/// Current state of one chain targeting p(y|gamma)^t p(gamma).
struct ChainState {
    ModelIndicator gamma;
    double log_ml = 0.0;
    double log_prior = 0.0;
    double temperature = 1.0;

    double log_kernel() const { return tempered_kernel(log_ml, log_prior, temperature); }
};

ChainState make_chain_state(ModelIndicator gamma, Model &model, double temperature = 1.0);

/// Exact draw from the model prior (h first drawn from its hyperprior if any).
ModelIndicator draw_from_prior(std::size_t p, const PriorSpec &prior, Rng &rng);

/// One adaptive Metropolis-Hastings step: propose, accept with a single uniform
/// draw, then adapt eta from the pre-move flip record.
StepRecord ia_step(ChainState &chain, ProposalParams &eta, const AdaptConfig &cfg, AdaptRule rule, std::size_t i,
                   Model &model, Rng &rng);

struct McmcConfig {
    AdaptConfig adapt;
    AdaptRule rule = AdaptRule::ReverseAccelerated;
    std::size_t chains = 1;
    std::size_t iterations = 100000; ///< post burn-in total over all chains
    std::size_t burnin = 10000;      ///< total over all chains
    std::size_t thin = 1;
    bool keep_records = true;
    bool track_models = true;
};

struct McmcResult {
    PosteriorSummary summary;
    ProposalParams eta;
    std::vector<StepRecord> records;             ///< all steps, chains interleaved
    std::vector<std::vector<double>> model_size; ///< per chain, post burn-in
    std::vector<std::vector<double>> log_kernel; ///< per chain, post burn-in
    std::vector<ModelIndicator> final_states;
    std::size_t per_chain_iterations = 0;
    std::size_t per_chain_burnin = 0;
    std::size_t truncated = 0; ///< iterations dropped so the budget divides by r
};

/// Multiple chain acceleration: r chains advanced round-robin, one shared eta
/// adapted after every chain step. r = 1 is the single-chain algorithm.
McmcResult mca_run(Model &model, const McmcConfig &cfg, std::uint64_t seed);

/// Starting point overload, one state per chain.
McmcResult mca_run(Model &model, const McmcConfig &cfg, std::uint64_t seed, std::vector<ModelIndicator> starts);

/// Add / remove / swap moves with the move type chosen uniformly among the
/// feasible ones.
std::vector<std::pair<ModelIndicator, double>> multimove_proposals(const ModelIndicator &gamma);
StepRecord multimove_mh_step(ChainState &chain, Model &model, Rng &rng);

/// The baseline sampler with the same budget rules as mca_run (adapt fields unused).
McmcResult multimove_run(Model &model, const McmcConfig &cfg, std::uint64_t seed);

// Parallel tempering

struct TemperatureLadder {
    std::vector<double> t; ///< increasing, t.back() == 1
    double rho_min = 1e-4;
    double zeta0 = 1.0;
    double lambda = 0.6;
    double target = 0.234;
    std::size_t updates = 0;

    /// t_j = 0.5^(m - j), j = 1..m
    static TemperatureLadder geometric(std::size_t m);

    std::size_t size() const { return t.size(); }
    std::vector<double> increments() const;
    /// Moves the gap between temperatures `lower` and `lower + 1` by
    /// zeta_h (a - target), clips at rho_min, and rebuilds the ladder downward
    /// from t_m = 1.
    void adapt(std::size_t lower, double acceptance);
    bool valid() const;
};

struct PtConfig {
    AdaptConfig adapt;
    AdaptRule rule = AdaptRule::ReverseAccelerated;
    std::size_t temperatures = 6;
    double swap_target = 0.234;
    double zeta0 = 1.0;
    std::size_t sweeps = 100000; ///< post burn-in
    std::size_t burnin = 10000;
    std::size_t thin = 1;
    bool keep_records = true;
    bool track_models = true;
};

struct PtState {
    std::vector<ChainState> chains; ///< chains[k] runs at ladder.t[k]; the last is the posterior
    std::vector<ProposalParams> etas;
    TemperatureLadder ladder;
    std::size_t sweep = 0;
};

struct SwapRecord {
    std::size_t lower = 0;
    double acceptance = 1.0;
    bool accepted = false;
};

struct PtSweep {
    std::vector<StepRecord> steps; ///< one per temperature
    SwapRecord swap;
};

PtState make_pt_state(Model &model, const PtConfig &cfg, Rng &rng);

/// log acceptance of swapping the states at temperatures t_k and t_l.
double swap_log_ratio(double log_ml_k, double log_ml_l, double t_k, double t_l);

PtSweep pt_step(PtState &state, const PtConfig &cfg, Model &model, Rng &rng);

struct PtResult {
    PosteriorSummary summary; ///< from the t = 1 chain
    std::vector<ProposalParams> etas;
    std::vector<StepRecord> records; ///< t = 1 chain, all sweeps
    std::vector<double> model_size;  ///< t = 1 chain, post burn-in
    std::vector<SwapRecord> swaps;
    std::vector<double> final_ladder;
    bool ladder_always_valid = true;
};

PtResult pt_run(Model &model, const PtConfig &cfg, std::uint64_t seed);

// Sequential Monte Carlo with adaptive tempering

struct SmcConfig {
    AdaptConfig adapt;
    AdaptRule rule = AdaptRule::ReverseAccelerated;
    std::size_t particles = 2000;
    std::size_t steps = 10; ///< IA steps per particle per stage
    double ess_fraction = 0.9;
    std::size_t max_stages = 100000;
};

struct SmcStage {
    double temperature = 0.0;
    double ess = 0.0; ///< of the selection weights
    double log_mean_weight = 0.0;
    double acceptance = 0.0;    ///< mean forward acceptance in the move step
    double mutation_rate = 0.0; ///< fraction of moves that changed a particle
};

struct SmcResult {
    std::vector<ModelIndicator> particles;
    std::vector<SmcStage> stages;
    double log_normalizer = 0.0;
    PosteriorSummary summary;
    ProposalParams eta;
};

/// (sum w)^2 / sum w^2 from log weights.
double weights_ess(std::span<const double> log_weights);

/// Bisects for t in (t_prev, 1] with ESS(w(t)) close to target_ess; returns 1
/// when the ESS at 1 already meets it.
double next_temperature(std::span<const double> log_ml, double t_prev, double target_ess);

/// Single offset u in [0, 1/N); index counts lie in {floor(N w_j), ceil(N w_j)}.
std::vector<std::size_t> systematic_resample(std::span<const double> weights, double u);
std::vector<std::size_t> systematic_resample(std::span<const double> weights, Rng &rng);

SmcResult smc_run(Model &model, const SmcConfig &cfg, std::uint64_t seed);

} // namespace iavs
