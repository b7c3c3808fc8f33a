#pragma once

#include "adaptation.hpp"
#include "model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace iavs {

enum class Algorithm { Ia, IaRapa, MhBaseline, Pt, Smc, Enumerate };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

using KeyValues = std::map<std::string, std::string>;

struct RunConfig {
    std::string data;
    std::string response = "0";
    Algorithm algorithm = Algorithm::IaRapa;

    std::string prior = "ridge"; ///< ridge | gprior
    double g = 100.0;
    std::optional<double> h; ///< default: min(5/p, 1/2)
    std::optional<std::pair<double, double>> h_beta;

    AdaptConfig adapt;

    std::size_t chains = 1;
    std::size_t iters = 100000;
    std::size_t burnin = 10000;
    std::size_t thin = 1;

    std::size_t temps = 6;
    double swap_target = 0.234;
    double zeta0 = 1.0;

    std::size_t particles = 2000;
    std::size_t smc_steps = 10;
    double ess_frac = 0.9;

    std::size_t replicates = 1;
    std::uint64_t seed = 1;
    bool standardize = false;
    std::string out = "out";
    std::size_t cache_capacity = LogKernelCache::default_capacity;
    std::size_t enumerate_limit = 20;
    bool trace = true;

    KeyValues to_key_values() const;
    /// Unknown keys and malformed values throw ConfigError.
    static RunConfig from_key_values(const KeyValues &kv);
    void validate() const;

    PriorSpec prior_spec(std::size_t p) const;

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

/// Flat "key = value" lines; '#' starts a comment.
KeyValues parse_key_values(std::string_view text);
std::string emit_key_values(const KeyValues &kv);
KeyValues read_key_value_file(const std::string &path);

} // namespace iavs
