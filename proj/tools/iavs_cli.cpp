// Command line front end: `iavs run` and `iavs generate`.
#include "iavs/config.hpp"
#include "iavs/run.hpp"
#include "iavs/synthetic.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

struct RunOption {
    const char *key;
    const char *help;
};

constexpr RunOption run_options[] = {
    {"data", "CSV file with a header row"},
    {"response", "response column (name or 0-based index)"},
    {"algorithm", "ia | ia-rapa | mh-baseline | pt | smc | enumerate"},
    {"prior", "ridge | gprior"},
    {"g", "coefficient prior scale"},
    {"h", "fixed prior inclusion probability"},
    {"h-beta", "Beta(a,b) hyperprior on h, given as a,b"},
    {"tau", "target acceptance rate"},
    {"epsilon", "bound keeping A and D inside (eps, 1-eps)"},
    {"lambda", "step size decay exponent"},
    {"phi0", "initial step size"},
    {"nu", "expected number of initial flips"},
    {"w", "reverse acceleration weight"},
    {"chains", "number of chains sharing the proposal"},
    {"iters", "iterations after burn-in (total over chains)"},
    {"burnin", "burn-in iterations (total over chains)"},
    {"thin", "trace thinning interval"},
    {"temps", "number of tempering levels"},
    {"swap-target", "target swap acceptance rate"},
    {"zeta0", "initial ladder step size"},
    {"particles", "number of SMC particles"},
    {"smc-steps", "IA steps per particle per stage"},
    {"ess-frac", "ESS fraction used to pick the next temperature"},
    {"replicates", "independent replicates"},
    {"seed", "master seed"},
    {"out", "output directory"},
    {"cache-capacity", "marginal likelihood cache entries"},
    {"enumerate-limit", "largest p for exhaustive enumeration"},
    {"trace", "write trace.csv (true | false)"},
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Adaptive MCMC for Bayesian variable selection", "iavs"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    auto *run_cmd = app.add_subcommand("run", "run a sampler on a CSV data set");
    std::map<std::string, std::string> flags;
    std::string config_file;
    bool standardize = false;
    run_cmd->add_option("--config", config_file, "key = value file; command line flags take precedence");
    for (const auto &opt : run_options)
        run_cmd->add_option(std::string("--") + opt.key, flags[opt.key], opt.help)
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    run_cmd->add_flag("--standardize", standardize, "scale covariates to unit variance");

    auto *gen_cmd = app.add_subcommand("generate", "write a synthetic data set");
    iavs::SyntheticSpec spec;
    std::string gen_out = "synthetic.csv";
    std::string truth_out;
    gen_cmd->add_option("--n", spec.n, "observations");
    gen_cmd->add_option("--p", spec.p, "covariates");
    gen_cmd->add_option("--signals", spec.signals, "non-zero coefficients");
    gen_cmd->add_option("--rho", spec.correlation, "equicorrelation between covariates");
    gen_cmd->add_option("--sigma", spec.noise_sd, "noise standard deviation");
    gen_cmd->add_option("--beta", spec.coefficient, "value of the non-zero coefficients");
    gen_cmd->add_option("--seed", spec.seed, "random seed");
    gen_cmd->add_option("--out", gen_out, "CSV output path");
    gen_cmd->add_option("--truth", truth_out, "truth output path (default: <out>.truth.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : iavs::exit_config;
    }

    try {
        if (*run_cmd) {
            iavs::KeyValues kv;
            if (!config_file.empty())
                kv = iavs::read_key_value_file(config_file);
            for (const auto &opt : run_options) {
                if (run_cmd->count(std::string("--") + opt.key) > 0)
                    kv[opt.key] = flags[opt.key];
            }
            if (standardize)
                kv["standardize"] = "true";
            iavs::run(iavs::RunConfig::from_key_values(kv), std::cerr);
        } else {
            if (truth_out.empty())
                truth_out = gen_out + ".truth.csv";
            iavs::write_synthetic(iavs::generate_synthetic(spec), gen_out, truth_out);
        }
    } catch (...) {
        return iavs::exit_code_for_current_exception(std::cerr);
    }
    return iavs::exit_ok;
}
