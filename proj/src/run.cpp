#include "iavs/run.hpp"

#include "iavs/diagnostics.hpp"
#include "iavs/errors.hpp"
#include "iavs/samplers.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

namespace iavs {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void write_file_atomic(const fs::path &path, const std::string &content) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw DataError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

int exit_code_for_current_exception(std::ostream &err) {
    try {
        throw;
    } catch (const ConfigError &e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const DataError &e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

namespace {

void put(std::string &out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

std::string pips_csv(const PosteriorSummary &s, const Dataset &data) {
    std::string out = "j,name,pip\n";
    for (std::size_t j = 0; j < s.pips.size(); ++j) {
        out += std::to_string(j) + "," + data.column_names[j] + ",";
        put(out, s.pips[j]);
        out += '\n';
    }
    return out;
}

std::string top_models_csv(const PosteriorSummary &s, const Dataset &data) {
    std::string out = "rank,probability,size,variables\n";
    for (std::size_t r = 0; r < s.top_models.size(); ++r) {
        const auto &[m, prob] = s.top_models[r];
        out += std::to_string(r + 1) + ",";
        put(out, prob);
        out += "," + std::to_string(m.size()) + ",";
        bool first = true;
        for (auto j : m.indices()) {
            if (!first)
                out += ' ';
            out += data.column_names[j];
            first = false;
        }
        out += '\n';
    }
    return out;
}

std::string eta_csv(const ProposalParams &eta) {
    std::string out = "j,A,D\n";
    for (std::size_t j = 0; j < eta.p(); ++j) {
        out += std::to_string(j) + ",";
        put(out, eta.add(j));
        out += ',';
        put(out, eta.del(j));
        out += '\n';
    }
    return out;
}

std::string trace_csv(const std::vector<StepRecord> &records, std::size_t thin) {
    std::string out = "iteration,chain,model_size,accepted,mutated,log_kernel\n";
    out.reserve(records.size() / thin * 40 + 64);
    for (const auto &r : records) {
        if (r.iteration % thin != 0)
            continue;
        out += std::to_string(r.iteration) + "," + std::to_string(r.chain) + "," + std::to_string(r.model_size) +
               "," + (r.accepted ? "1" : "0") + "," + (r.moved() ? "1" : "0") + ",";
        put(out, r.log_kernel);
        out += '\n';
    }
    return out;
}

std::string ad_ratio_csv(const std::vector<AdRatioRow> &rows) {
    std::string out = "j,ad_ratio,pip_odds,log_discrepancy\n";
    for (const auto &r : rows) {
        out += std::to_string(r.j) + ",";
        put(out, r.ad_ratio);
        out += ',';
        put(out, r.pip_odds);
        out += ',';
        put(out, r.log_discrepancy);
        out += '\n';
    }
    return out;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double pooled_ess(const std::vector<std::vector<double>> &series) {
    double total = 0.0;
    for (const auto &s : series) {
        if (s.size() >= 10)
            total += ess(s).value;
    }
    return total;
}

json config_echo(const RunConfig &cfg) {
    json j = json::object();
    for (const auto &[k, v] : cfg.to_key_values())
        j[k] = v;
    return j;
}

struct ReplicateOutput {
    std::vector<double> pips;
};

ReplicateOutput run_replicate(const RunConfig &cfg, std::shared_ptr<const Dataset> data, const PriorSpec &prior,
                              const std::optional<Enumeration> &exact, std::size_t replicate, const fs::path &dir) {
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t seed = cfg.replicates == 1 ? cfg.seed : derive_seed(cfg.seed, replicate);
    Model model(data, prior, cfg.cache_capacity);

    json manifest;
    manifest["started_at"] = timestamp();
    manifest["algorithm"] = std::string(to_string(cfg.algorithm));
    manifest["replicate"] = replicate;
    manifest["seed"] = seed;
    manifest["n"] = data->n();
    manifest["p"] = data->p();
    manifest["config"] = config_echo(cfg);

    PosteriorSummary summary;
    std::optional<ProposalParams> eta;

    switch (cfg.algorithm) {
    case Algorithm::Enumerate: {
        const auto e = exact ? *exact : enumerate_posterior(*data, prior, cfg.enumerate_limit);
        summary = e.summary();
        manifest["log_normalizer"] = e.log_normalizer;
        manifest["models"] = e.probabilities.size();
        break;
    }
    case Algorithm::Ia:
    case Algorithm::IaRapa:
    case Algorithm::MhBaseline: {
        McmcConfig mc;
        mc.adapt = cfg.adapt;
        mc.rule = cfg.algorithm == Algorithm::Ia ? AdaptRule::Individual : AdaptRule::ReverseAccelerated;
        mc.chains = cfg.chains;
        mc.iterations = cfg.iters;
        mc.burnin = cfg.burnin;
        mc.thin = cfg.thin;
        mc.track_models = true;
        const auto res = cfg.algorithm == Algorithm::MhBaseline ? multimove_run(model, mc, seed)
                                                               : mca_run(model, mc, seed);
        summary = res.summary;
        if (cfg.algorithm != Algorithm::MhBaseline)
            eta = res.eta;
        const auto mr = mutation_rate(res.records, res.per_chain_burnin);
        manifest["mutation_rate"] = mr.realized;
        manifest["mutation_rate_rao_blackwell"] = mr.rao_blackwell;
        manifest["ess_model_size"] = pooled_ess(res.model_size);
        manifest["ess_log_kernel"] = pooled_ess(res.log_kernel);
        manifest["per_chain_iterations"] = res.per_chain_iterations;
        manifest["per_chain_burnin"] = res.per_chain_burnin;
        manifest["truncated_iterations"] = res.truncated;
        if (cfg.trace)
            write_file_atomic(dir / "trace.csv", trace_csv(res.records, cfg.thin));
        break;
    }
    case Algorithm::Pt: {
        PtConfig pc;
        pc.adapt = cfg.adapt;
        pc.temperatures = cfg.temps;
        pc.swap_target = cfg.swap_target;
        pc.zeta0 = cfg.zeta0;
        pc.sweeps = cfg.iters;
        pc.burnin = cfg.burnin;
        pc.thin = cfg.thin;
        const auto res = pt_run(model, pc, seed);
        summary = res.summary;
        eta = res.etas.back();
        const auto mr = mutation_rate(res.records, cfg.burnin);
        manifest["mutation_rate"] = mr.realized;
        manifest["mutation_rate_rao_blackwell"] = mr.rao_blackwell;
        if (res.model_size.size() >= 10)
            manifest["ess_model_size"] = ess(res.model_size).value;
        double swap_sum = 0.0;
        std::size_t swap_n = 0;
        for (std::size_t s = cfg.burnin; s < res.swaps.size(); ++s, ++swap_n)
            swap_sum += res.swaps[s].acceptance;
        manifest["swap_acceptance"] = swap_n ? swap_sum / static_cast<double>(swap_n) : 0.0;
        manifest["ladder"] = res.final_ladder;
        std::string ladder = "k,temperature\n";
        for (std::size_t k = 0; k < res.final_ladder.size(); ++k) {
            ladder += std::to_string(k) + ",";
            put(ladder, res.final_ladder[k]);
            ladder += '\n';
        }
        write_file_atomic(dir / "ladder.csv", ladder);
        if (cfg.trace)
            write_file_atomic(dir / "trace.csv", trace_csv(res.records, cfg.thin));
        break;
    }
    case Algorithm::Smc: {
        SmcConfig sc;
        sc.adapt = cfg.adapt;
        sc.particles = cfg.particles;
        sc.steps = cfg.smc_steps;
        sc.ess_fraction = cfg.ess_frac;
        const auto res = smc_run(model, sc, seed);
        summary = res.summary;
        eta = res.eta;
        manifest["log_normalizer"] = res.log_normalizer;
        manifest["stages"] = res.stages.size();
        std::string stages = "stage,temperature,ess,log_mean_weight,acceptance,mutation_rate\n";
        for (std::size_t k = 0; k < res.stages.size(); ++k) {
            const auto &s = res.stages[k];
            stages += std::to_string(k + 1) + ",";
            put(stages, s.temperature);
            stages += ',';
            put(stages, s.ess);
            stages += ',';
            put(stages, s.log_mean_weight);
            stages += ',';
            put(stages, s.acceptance);
            stages += ',';
            put(stages, s.mutation_rate);
            stages += '\n';
        }
        write_file_atomic(dir / "stages.csv", stages);
        break;
    }
    }

    write_file_atomic(dir / "pips.csv", pips_csv(summary, *data));
    write_file_atomic(dir / "top_models.csv", top_models_csv(summary, *data));
    manifest["sample_count"] = summary.sample_count;
    manifest["mean_model_size"] = summary.mean_model_size;
    if (eta) {
        write_file_atomic(dir / "eta.csv", eta_csv(*eta));
        GoldStandard gold{summary.pips, GoldSource::LongRun};
        if (exact)
            gold = exact->gold;
        write_file_atomic(dir / "ad_ratio.csv", ad_ratio_csv(ad_ratio_report(*eta, gold)));
        manifest["ad_ratio_gold"] = gold.source == GoldSource::Enumeration ? "enumeration" : "run";
    }
    if (exact && cfg.algorithm != Algorithm::Enumerate)
        manifest["wmse_vs_enumeration"] = wmse({summary.pips}, exact->gold);
    manifest["cache_entries"] = model.cache().size();
    manifest["marginal_evaluations"] = model.evaluations();
    manifest["runtime_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    return {summary.pips};
}

} // namespace

void run(const RunConfig &config, std::ostream &log) {
    config.validate();
    auto data = std::make_shared<const Dataset>(load_csv(config.data, config.response, config.standardize));
    const PriorSpec prior = config.prior_spec(data->p());
    log << "loaded " << data->n() << " observations, " << data->p() << " candidate variables\n";

    std::optional<Enumeration> exact;
    if (data->p() <= config.enumerate_limit)
        exact = enumerate_posterior(*data, prior, config.enumerate_limit);
    else if (config.algorithm == Algorithm::Enumerate)
        throw TooManyVariables("enumeration limited to p <= " + std::to_string(config.enumerate_limit));

    const fs::path root(config.out);
    fs::create_directories(root);
    const std::size_t reps = config.algorithm == Algorithm::Enumerate ? 1 : config.replicates;
    std::vector<ReplicateOutput> outputs(reps);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
        try {
            const auto rep = static_cast<std::size_t>(r);
            char name[32];
            std::snprintf(name, sizeof name, "rep_%03zu", rep);
            const fs::path dir = reps == 1 ? root : root / name;
            outputs[rep] = run_replicate(config, data, prior, exact, rep, dir);
        } catch (...) {
#pragma omp critical(iavs_run_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    if (reps > 1) {
        std::string table = "replicate,j,pip\n";
        std::vector<std::vector<double>> estimates;
        for (std::size_t r = 0; r < reps; ++r) {
            for (std::size_t j = 0; j < outputs[r].pips.size(); ++j) {
                table += std::to_string(r) + "," + std::to_string(j) + ",";
                put(table, outputs[r].pips[j]);
                table += '\n';
            }
            estimates.push_back(outputs[r].pips);
        }
        write_file_atomic(root / "replicate_pips.csv", table);
        json summary;
        summary["replicates"] = reps;
        summary["seed"] = config.seed;
        if (exact)
            summary["wmse_vs_enumeration"] = wmse(estimates, exact->gold);
        write_file_atomic(root / "summary.json", summary.dump(2) + "\n");
    }
    log << "wrote results to " << root.string() << '\n';
}

} // namespace iavs
