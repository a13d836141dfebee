#pragma once

#include <filesystem>

#include "landerval/config.hpp"

namespace landerval {

// Aggregates whatever command artifacts exist in `dir` into report.md plus
// q_trace.svg / boundary.svg. Throws ConfigError naming the expected files
// when none are present.
void write_report(const AppConfig& config, const std::filesystem::path& dir);

}  // namespace landerval
