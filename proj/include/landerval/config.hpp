#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "landerval/controllers.hpp"
#include "landerval/env.hpp"
#include "landerval/safety.hpp"
#include "landerval/validator.hpp"

namespace landerval {

struct ValidateParams {
    int dump_trajectories = 0;  // dump the first k rollouts as CSV
};

struct BoundaryParams {
    std::vector<double> p0_values;  // empty = use decision.p0
};

struct CalibrateParams {
    std::vector<double> true_p_grid{0.80, 0.90, 0.95, 0.99, 0.999};
    int sessions_per_point = 1000;
};

struct SweepParams {
    int ladder_count = 10;
    double quality_low = 0.3;
    double quality_high = 1.0;
    std::uint64_t oracle_rollouts = 10000;
};

struct ExperimentParams {
    ValidateParams validate;
    BoundaryParams boundary;
    CalibrateParams calibrate;
    SweepParams sweep;
};

struct AppConfig {
    ValidationConfig decision;  // includes the prior
    SafetyThresholds thresholds;
    EnvLimits limits;
    ConditionSpec environment;
    PolicySpec policy;
    // Base seed under which the default PD gains were certified (quality 1.0
    // capability >= 0.98 at n = 10^4); see README.
    std::uint64_t certification_seed = 0;
    ExperimentParams experiment;
};

AppConfig default_config();

// Defaults overridden by the JSON file (sections: prior, decision,
// thresholds, environment, policy, experiment). Unknown keys and invalid
// values raise ConfigError.
AppConfig load_config(const std::filesystem::path& path);
AppConfig parse_config(const std::string& json_text);

void validate_app_config(const AppConfig& config);

}  // namespace landerval
