#pragma once

#include <cstdint>
#include <filesystem>

#include "landerval/config.hpp"

namespace landerval {

struct RunOptions {
    std::uint64_t base_seed = 0;
    std::filesystem::path out_dir;
    int parallelism = 1;
};

// Each command is a pure function of (config, base_seed): rerunning with the
// same inputs rewrites byte-identical artifacts, and the parallelism level
// never changes any output. See docs/schemas.md for the file formats.

// One sequential session over the configured policy; writes session.jsonl,
// q_trace.csv, summary.json, and optional trajectory_NNN.csv dumps.
void run_validate(const AppConfig& config, const RunOptions& options);

// Posterior approval probability against success count at the horizon;
// writes boundary.csv and boundary_summary.json (minimal approving count).
void run_boundary(const AppConfig& config, const RunOptions& options);

// Session outcome frequencies over a grid of synthetic true success rates;
// writes calibration.csv.
void run_calibrate(const AppConfig& config, const RunOptions& options);

// Checkpoint-ladder sweep: sequential session, horizon statistics, reward
// scatter, and the n = oracle_rollouts capability oracle per member; writes
// sweep_summary.csv, sweep_sequential.csv, sweep_rewards.csv, sweep.json.
void run_sweep(const AppConfig& config, const RunOptions& options);

// Aggregates artifacts already present in out_dir into report.md plus SVG
// charts of the q trace and the approval boundary. Throws ConfigError naming
// the missing files when the directory holds nothing to report on.
void run_report(const AppConfig& config, const RunOptions& options);

}  // namespace landerval
