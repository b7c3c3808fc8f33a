#include "iavs/config.hpp"

#include "iavs/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace iavs {

namespace {

constexpr std::pair<Algorithm, std::string_view> algorithm_names[] = {
    {Algorithm::Ia, "ia"},   {Algorithm::IaRapa, "ia-rapa"}, {Algorithm::MhBaseline, "mh-baseline"},
    {Algorithm::Pt, "pt"},   {Algorithm::Smc, "smc"},         {Algorithm::Enumerate, "enumerate"},
};

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(const std::string &key, const std::string &value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v))
        throw ConfigError("invalid number for " + key + ": '" + value + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &value) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        // accept 1e5-style counts
        const double d = parse_double(key, value);
        if (d < 0.0 || d != std::floor(d) || d > 1e18)
            throw ConfigError("invalid count for " + key + ": '" + value + "'");
        return static_cast<std::uint64_t>(d);
    }
    return v;
}

bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    throw ConfigError("invalid boolean for " + key + ": '" + value + "'");
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::string_view to_string(Algorithm a) {
    for (const auto &[alg, name] : algorithm_names) {
        if (alg == a)
            return name;
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view s) {
    for (const auto &[alg, name] : algorithm_names) {
        if (name == s)
            return alg;
    }
    throw ConfigError("unknown algorithm '" + std::string(s) + "'");
}

KeyValues RunConfig::to_key_values() const {
    KeyValues kv;
    kv["data"] = data;
    kv["response"] = response;
    kv["algorithm"] = std::string(to_string(algorithm));
    kv["prior"] = prior;
    kv["g"] = format_double(g);
    if (h)
        kv["h"] = format_double(*h);
    if (h_beta)
        kv["h-beta"] = format_double(h_beta->first) + "," + format_double(h_beta->second);
    kv["tau"] = format_double(adapt.tau);
    kv["epsilon"] = format_double(adapt.epsilon);
    kv["lambda"] = format_double(adapt.lambda);
    kv["phi0"] = format_double(adapt.phi0);
    kv["nu"] = format_double(adapt.nu);
    kv["w"] = format_double(adapt.w);
    kv["chains"] = std::to_string(chains);
    kv["iters"] = std::to_string(iters);
    kv["burnin"] = std::to_string(burnin);
    kv["thin"] = std::to_string(thin);
    kv["temps"] = std::to_string(temps);
    kv["swap-target"] = format_double(swap_target);
    kv["zeta0"] = format_double(zeta0);
    kv["particles"] = std::to_string(particles);
    kv["smc-steps"] = std::to_string(smc_steps);
    kv["ess-frac"] = format_double(ess_frac);
    kv["replicates"] = std::to_string(replicates);
    kv["seed"] = std::to_string(seed);
    kv["standardize"] = standardize ? "true" : "false";
    kv["out"] = out;
    kv["cache-capacity"] = std::to_string(cache_capacity);
    kv["enumerate-limit"] = std::to_string(enumerate_limit);
    kv["trace"] = trace ? "true" : "false";
    return kv;
}

RunConfig RunConfig::from_key_values(const KeyValues &kv) {
    RunConfig c;
    for (const auto &[key, value] : kv) {
        if (key == "data")
            c.data = value;
        else if (key == "response")
            c.response = value;
        else if (key == "algorithm")
            c.algorithm = parse_algorithm(value);
        else if (key == "prior") {
            if (value != "ridge" && value != "gprior")
                throw ConfigError("prior must be 'ridge' or 'gprior'");
            c.prior = value;
        } else if (key == "g")
            c.g = parse_double(key, value);
        else if (key == "h")
            c.h = parse_double(key, value);
        else if (key == "h-beta") {
            const auto comma = value.find(',');
            if (comma == std::string::npos)
                throw ConfigError("h-beta expects 'a,b'");
            c.h_beta = std::make_pair(parse_double(key, trim(value.substr(0, comma))),
                                      parse_double(key, trim(value.substr(comma + 1))));
        } else if (key == "tau")
            c.adapt.tau = parse_double(key, value);
        else if (key == "epsilon")
            c.adapt.epsilon = parse_double(key, value);
        else if (key == "lambda")
            c.adapt.lambda = parse_double(key, value);
        else if (key == "phi0")
            c.adapt.phi0 = parse_double(key, value);
        else if (key == "nu")
            c.adapt.nu = parse_double(key, value);
        else if (key == "w")
            c.adapt.w = parse_double(key, value);
        else if (key == "chains")
            c.chains = parse_unsigned(key, value);
        else if (key == "iters")
            c.iters = parse_unsigned(key, value);
        else if (key == "burnin")
            c.burnin = parse_unsigned(key, value);
        else if (key == "thin")
            c.thin = parse_unsigned(key, value);
        else if (key == "temps")
            c.temps = parse_unsigned(key, value);
        else if (key == "swap-target")
            c.swap_target = parse_double(key, value);
        else if (key == "zeta0")
            c.zeta0 = parse_double(key, value);
        else if (key == "particles")
            c.particles = parse_unsigned(key, value);
        else if (key == "smc-steps")
            c.smc_steps = parse_unsigned(key, value);
        else if (key == "ess-frac")
            c.ess_frac = parse_double(key, value);
        else if (key == "replicates")
            c.replicates = parse_unsigned(key, value);
        else if (key == "seed")
            c.seed = parse_unsigned(key, value);
        else if (key == "standardize")
            c.standardize = parse_bool(key, value);
        else if (key == "out")
            c.out = value;
        else if (key == "cache-capacity")
            c.cache_capacity = parse_unsigned(key, value);
        else if (key == "enumerate-limit")
            c.enumerate_limit = parse_unsigned(key, value);
        else if (key == "trace")
            c.trace = parse_bool(key, value);
        else
            throw ConfigError("unknown configuration key '" + key + "'");
    }
    return c;
}

void RunConfig::validate() const {
    if (data.empty())
        throw ConfigError("no data file given");
    if (!(g > 0.0))
        throw ConfigError("g must be positive");
    if (h && h_beta)
        throw ConfigError("give either h or h-beta, not both");
    if (h && !(*h > 0.0 && *h < 1.0))
        throw ConfigError("h must lie in (0, 1)");
    if (h_beta && !(h_beta->first > 0.0 && h_beta->second > 0.0))
        throw ConfigError("h-beta parameters must be positive");
    if (algorithm != Algorithm::Enumerate && algorithm != Algorithm::MhBaseline)
        adapt.validate();
    if (chains < 1 || thin < 1 || replicates < 1 || cache_capacity < 1)
        throw ConfigError("chains, thin, replicates and cache-capacity must be at least 1");
    if (chains > 1 && (algorithm == Algorithm::Pt || algorithm == Algorithm::Smc))
        throw ConfigError("multiple chains are supported for ia, ia-rapa and mh-baseline only");
    const bool mcmc = algorithm == Algorithm::Ia || algorithm == Algorithm::IaRapa ||
                      algorithm == Algorithm::MhBaseline || algorithm == Algorithm::Pt;
    if (mcmc && iters < chains)
        throw ConfigError("iters must be at least the number of chains");
    if (algorithm == Algorithm::Pt) {
        if (temps < 2)
            throw ConfigError("temps must be at least 2");
        if (!(swap_target > 0.0 && swap_target < 1.0))
            throw ConfigError("swap-target must lie in (0, 1)");
        if (!(zeta0 > 0.0))
            throw ConfigError("zeta0 must be positive");
    }
    if (algorithm == Algorithm::Smc) {
        if (particles < 2)
            throw ConfigError("particles must be at least 2");
        if (smc_steps < 1)
            throw ConfigError("smc-steps must be at least 1");
        if (!(ess_frac > 0.0 && ess_frac < 1.0))
            throw ConfigError("ess-frac must lie in (0, 1)");
    }
}

PriorSpec RunConfig::prior_spec(std::size_t p) const {
    PriorSpec spec;
    if (prior == "gprior")
        spec.coef = GPrior{g};
    else
        spec.coef = RidgePrior{g};
    if (h_beta)
        spec.inclusion = BetaInclusion{h_beta->first, h_beta->second};
    else if (h)
        spec.inclusion = FixedInclusion{*h};
    else
        spec.inclusion = FixedInclusion{std::min(0.5, 5.0 / static_cast<double>(p))};
    spec.validate();
    return spec;
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        auto line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto t = trim(line);
        if (!t.empty()) {
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line_no) + " lacks '='");
            auto key = trim(std::string_view(t).substr(0, eq));
            if (key.rfind("--", 0) == 0)
                key = key.substr(2);
            kv[key] = trim(std::string_view(t).substr(eq + 1));
        }
        start = end + 1;
    }
    return kv;
}

std::string emit_key_values(const KeyValues &kv) {
    std::string out;
    for (const auto &[k, v] : kv)
        out += k + " = " + v + "\n";
    return out;
}

KeyValues read_key_value_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

} // namespace iavs
