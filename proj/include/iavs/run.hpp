#pragma once

#include "config.hpp"

#include <filesystem>
#include <ostream>
#include <string>

namespace iavs {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_data = 3,
    exit_numerical = 4,
};

/// Runs every replicate of the configured algorithm and writes its output
/// files. Replicate i is seeded from (seed, i) and written to out/ when there
/// is a single replicate, else out/rep_<i>/.
void run(const RunConfig &config, std::ostream &log);

/// Maps the current exception to an exit code (call from a catch block).
int exit_code_for_current_exception(std::ostream &err);

/// Writes `content` to a sibling temporary then renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

} // namespace iavs
