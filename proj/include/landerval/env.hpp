#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "landerval/rng.hpp"
#include "landerval/safety.hpp"

namespace landerval {

struct PolicySpec;  // controllers.hpp

// Planar lander state in pad coordinates: x lateral, z altitude,
// theta pitch (0 = upright), omega pitch rate. Nondimensional units.
struct LanderState {
    double x = 0.0;
    double z = 0.0;
    double vx = 0.0;
    double vz = 0.0;
    double theta = 0.0;
    double omega = 0.0;
};

// Commanded controls; clamped to [0, 1] / [-1, 1] before integration.
struct ControlInput {
    double thrust = 0.0;
    double elevator = 0.0;
};

// Physical constants (unit mass and inertia).
inline constexpr double kGravity = 1.0;
inline constexpr double kMaxThrustAccel = 1.8;
inline constexpr double kMaxTorque = 4.0;
inline constexpr double kLegOffset = 0.1;
inline constexpr double kLegLength = 0.05;

struct EnvLimits {
    double dt = 0.02;
    int max_steps = 1500;
    double tumble_bound = 1.5707963267948966;  // |theta| beyond this is a crash
    double discount = 0.99;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

// Uniform ranges defining an operating regime. A zero-width range pins its
// quantity to the nominal value regardless of seed.
struct ConditionSpec {
    Range initial_x{-0.3, 0.3};
    Range initial_altitude{0.9, 1.1};
    Range initial_vx{-0.1, 0.1};
    Range initial_vz{-0.3, -0.1};
    Range initial_pitch{-0.1, 0.1};
    Range initial_pitch_rate{-0.05, 0.05};
    Range wind_mean{-0.05, 0.05};
    Range wind_gust_sd{0.0, 0.05};
    Range sensor_noise_sd{0.0, 0.005};
    Range actuator_gain{0.9, 1.1};
};

// One sampled episode: initial state, disturbance/actuation parameters, and
// the seed all of the episode's random streams are keyed by.
struct OperatingCondition {
    LanderState initial_state;
    double wind_mean = 0.0;
    double wind_gust_sd = 0.0;
    double sensor_noise_sd = 0.0;
    double actuator_gain = 1.0;
    std::uint64_t seed = 0;
};

enum class TerminationKind { touchdown, crash, timeout };

struct RolloutOutcome {
    int outcome = 0;  // == bernoulli_outcome(verdict)
    SafetyVerdict verdict;
    TouchdownRecord touchdown;
    TerminationKind termination = TerminationKind::timeout;
    double cumulative_reward = 0.0;  // discounted
    int steps = 0;
    std::uint64_t seed = 0;
};

struct TrajectorySample {
    int step;
    double t, x, z, vx, vz, theta, omega, thrust, elevator, reward;
};
using TrajectoryLog = std::vector<TrajectorySample>;

struct CapabilityEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

struct MarginalCapabilities {
    std::array<double, kNumSafetyConstraints> marginal{};
    double joint = 0.0;
    std::uint64_t trials = 0;
};

struct WeightedCondition {
    ConditionSpec spec;
    double weight = 0.0;
};

// Throws ConfigError on inverted ranges or invalid scales.
void validate_spec(const ConditionSpec& spec);

OperatingCondition sample_operating_condition(const ConditionSpec& spec, std::uint64_t seed);

// One semi-implicit Euler step (velocities first, then positions); the gust
// draw comes from `gusts`. Control is clamped before use. Thrust acts along
// the body axis: ax = A sin(theta) + wind, az = A cos(theta) - g with
// A = kMaxThrustAccel * thrust * actuator_gain.
LanderState step(const LanderState& state, const ControlInput& control,
                 const OperatingCondition& condition, const EnvLimits& limits, RngStream& gusts);

// Runs one episode to touchdown, crash (tumble or non-finite state), or
// timeout, evaluates the touchdown record, and returns the Bernoulli outcome.
// Touchdown state is linearly interpolated at the first z crossing.
// synthetic_bernoulli policies bypass the dynamics entirely.
RolloutOutcome run_rollout(const PolicySpec& policy, const OperatingCondition& condition,
                           const SafetyThresholds& thresholds, const EnvLimits& limits,
                           TrajectoryLog* trajectory = nullptr);

// Monte Carlo capability oracle: n independent rollouts with conditions drawn
// from `spec` under the seed chain rollout_seed(base_seed, i). Results are
// reduced in rollout-index order, so any parallelism level gives identical
// output.
CapabilityEstimate estimate_capability(const PolicySpec& policy, const ConditionSpec& spec,
                                       const SafetyThresholds& thresholds, const EnvLimits& limits,
                                       std::uint64_t n, std::uint64_t base_seed,
                                       int parallelism = 1);

// Per-constraint satisfaction frequencies from the same rollouts as the joint.
MarginalCapabilities estimate_marginal_capabilities(const PolicySpec& policy,
                                                    const ConditionSpec& spec,
                                                    const SafetyThresholds& thresholds,
                                                    const EnvLimits& limits, std::uint64_t n,
                                                    std::uint64_t base_seed, int parallelism = 1);

// Weighted average of per-condition capabilities. Weights must be nonnegative
// and sum to 1 within 1e-9.
double estimate_robust_capability(const PolicySpec& policy,
                                  const std::vector<WeightedCondition>& grid,
                                  const SafetyThresholds& thresholds, const EnvLimits& limits,
                                  std::uint64_t n_per_condition, std::uint64_t base_seed,
                                  int parallelism = 1);

}  // namespace landerval
