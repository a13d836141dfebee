#include "landerval/env.hpp"

#include <algorithm>
#include <cmath>

#include "landerval/controllers.hpp"
#include "landerval/errors.hpp"
#include "landerval/parallel.hpp"

namespace landerval {
namespace {

void check_range(const char* name, const Range& r, bool nonnegative = false,
                 bool positive = false) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi)) || r.lo > r.hi)
        throw ConfigError(std::string("condition spec: inverted or non-finite range for ") + name);
    if (nonnegative && r.lo < 0.0)
        throw ConfigError(std::string("condition spec: ") + name + " must be nonnegative");
    if (positive && r.lo <= 0.0)
        throw ConfigError(std::string("condition spec: ") + name + " must be positive");
}

double contact_indicator(double tip_height) {
    return std::clamp(1.0 - std::fabs(tip_height) / kLegLength, 0.0, 1.0);
}

bool finite_state(const LanderState& s) {
    return std::isfinite(s.x) && std::isfinite(s.z) && std::isfinite(s.vx) &&
           std::isfinite(s.vz) && std::isfinite(s.theta) && std::isfinite(s.omega);
}

void check_rollout_count(std::uint64_t n) {
    if (n == 0) throw ConfigError("capability estimate: rollout count must be positive");
}

}  // namespace

void validate_spec(const ConditionSpec& spec) {
    check_range("initial_x", spec.initial_x);
    check_range("initial_altitude", spec.initial_altitude, false, true);
    check_range("initial_vx", spec.initial_vx);
    check_range("initial_vz", spec.initial_vz);
    check_range("initial_pitch", spec.initial_pitch);
    check_range("initial_pitch_rate", spec.initial_pitch_rate);
    check_range("wind_mean", spec.wind_mean);
    check_range("wind_gust_sd", spec.wind_gust_sd, true);
    check_range("sensor_noise_sd", spec.sensor_noise_sd, true);
    check_range("actuator_gain", spec.actuator_gain, false, true);
}

OperatingCondition sample_operating_condition(const ConditionSpec& spec, std::uint64_t seed) {
    validate_spec(spec);
    RngStream rng(seed, 0, StreamId::initial_conditions);
    OperatingCondition c;
    c.initial_state.x = rng.next_uniform(spec.initial_x.lo, spec.initial_x.hi);
    c.initial_state.z = rng.next_uniform(spec.initial_altitude.lo, spec.initial_altitude.hi);
    c.initial_state.vx = rng.next_uniform(spec.initial_vx.lo, spec.initial_vx.hi);
    c.initial_state.vz = rng.next_uniform(spec.initial_vz.lo, spec.initial_vz.hi);
    c.initial_state.theta = rng.next_uniform(spec.initial_pitch.lo, spec.initial_pitch.hi);
    c.initial_state.omega = rng.next_uniform(spec.initial_pitch_rate.lo, spec.initial_pitch_rate.hi);
    c.wind_mean = rng.next_uniform(spec.wind_mean.lo, spec.wind_mean.hi);
    c.wind_gust_sd = rng.next_uniform(spec.wind_gust_sd.lo, spec.wind_gust_sd.hi);
    c.sensor_noise_sd = rng.next_uniform(spec.sensor_noise_sd.lo, spec.sensor_noise_sd.hi);
    c.actuator_gain = rng.next_uniform(spec.actuator_gain.lo, spec.actuator_gain.hi);
    c.seed = seed;
    return c;
}

LanderState step(const LanderState& state, const ControlInput& control,
                 const OperatingCondition& condition, const EnvLimits& limits, RngStream& gusts) {
    const double thrust = std::clamp(control.thrust, 0.0, 1.0);
    const double elevator = std::clamp(control.elevator, -1.0, 1.0);
    const double gust = condition.wind_gust_sd > 0.0 ? condition.wind_gust_sd * gusts.next_normal() : 0.0;

    const double accel = kMaxThrustAccel * thrust * condition.actuator_gain;
    const double ax = accel * std::sin(state.theta) + condition.wind_mean + gust;
    const double az = accel * std::cos(state.theta) - kGravity;

    LanderState next;
    next.vx = state.vx + limits.dt * ax;
    next.vz = state.vz + limits.dt * az;
    next.omega = state.omega + limits.dt * kMaxTorque * elevator;
    next.x = state.x + limits.dt * next.vx;
    next.z = state.z + limits.dt * next.vz;
    next.theta = state.theta + limits.dt * next.omega;
    return next;
}

RolloutOutcome run_rollout(const PolicySpec& policy, const OperatingCondition& condition,
                           const SafetyThresholds& thresholds, const EnvLimits& limits,
                           TrajectoryLog* trajectory) {
    if (policy.kind == PolicyKind::synthetic_bernoulli) {
        RolloutOutcome out = synthetic_outcome(policy, condition.seed);
        out.verdict = evaluate_safety(out.touchdown, thresholds);
        out.outcome = bernoulli_outcome(out.verdict);
        return out;
    }
    if (!(limits.dt > 0.0) || limits.max_steps < 1)
        throw ConfigError("run_rollout: dt must be positive and max_steps >= 1");

    RngStream gusts(condition.seed, 0, StreamId::gusts);
    RngStream observation(condition.seed, 0, StreamId::observation_noise);
    RngStream policy_noise(condition.seed, policy.noise_seed_offset, StreamId::policy_noise);

    // Episode-constant trim biases are the first two draws off the policy
    // stream; per-step noise continues from the same stream.
    PolicySpec live = policy;
    if (live.kind == PolicyKind::pd_family && live.quality < 1.0) {
        const double degrade = 1.0 - std::clamp(live.quality, 0.0, 1.0);
        live.thrust_trim += live.gains.thrust_trim_sd * degrade * policy_noise.next_normal();
        live.elevator_trim += live.gains.elevator_trim_sd * degrade * policy_noise.next_normal();
    }

    RolloutOutcome out;
    out.seed = condition.seed;

    const double x0 = condition.initial_state.x;
    const double z0 = std::max(condition.initial_state.z, 1e-12);
    LanderState state = condition.initial_state;
    double discount = 1.0;

    for (int k = 0; k < limits.max_steps; ++k) {
        LanderState observed = state;
        if (condition.sensor_noise_sd > 0.0) {
            const double sd = condition.sensor_noise_sd;
            observed.x += sd * observation.next_normal();
            observed.z += sd * observation.next_normal();
            observed.vx += sd * observation.next_normal();
            observed.vz += sd * observation.next_normal();
            observed.theta += sd * observation.next_normal();
            observed.omega += sd * observation.next_normal();
        }
        const ControlInput control = act(live, observed, policy_noise);
        const LanderState next = step(state, control, condition, limits, gusts);

        // Shaping: distance to the straight glide line from the spawn point
        // to the pad, plus attitude and fuel terms. Diagnostic only.
        const double x_glide = x0 * std::clamp(state.z / z0, 0.0, 1.0);
        const double reward =
            -(0.1 * std::fabs(state.x - x_glide) + 0.05 * std::fabs(state.theta)) -
            0.01 * std::clamp(control.thrust, 0.0, 1.0);
        if (trajectory)
            trajectory->push_back({k, k * limits.dt, state.x, state.z, state.vx, state.vz,
                                   state.theta, state.omega, control.thrust, control.elevator,
                                   reward});
        out.cumulative_reward += discount * reward;
        discount *= limits.discount;
        out.steps = k + 1;

        if (!finite_state(next) || std::fabs(next.theta) > limits.tumble_bound) {
            out.termination = TerminationKind::crash;
            out.cumulative_reward += discount * -100.0;
            break;
        }
        if (next.z <= 0.0) {
            const double frac = state.z / (state.z - next.z);  // state.z > 0 >= next.z
            TouchdownRecord td;
            td.touched_down = true;
            td.x = state.x + frac * (next.x - state.x);
            td.z = state.z + frac * (next.z - state.z);
            td.vx = state.vx + frac * (next.vx - state.vx);
            td.vz = state.vz + frac * (next.vz - state.vz);
            td.theta = state.theta + frac * (next.theta - state.theta);
            const double tilt = std::sin(td.theta);
            td.contact_left = contact_indicator(td.z + kLegOffset * tilt);
            td.contact_right = contact_indicator(td.z - kLegOffset * tilt);
            out.touchdown = td;
            out.termination = TerminationKind::touchdown;
            break;
        }
        state = next;
    }

    out.verdict = evaluate_safety(out.touchdown, thresholds);
    out.outcome = bernoulli_outcome(out.verdict);
    if (out.termination == TerminationKind::touchdown && out.outcome == 1)
        out.cumulative_reward += discount * 100.0;
    return out;
}

CapabilityEstimate estimate_capability(const PolicySpec& policy, const ConditionSpec& spec,
                                       const SafetyThresholds& thresholds, const EnvLimits& limits,
                                       std::uint64_t n, std::uint64_t base_seed, int parallelism) {
    check_rollout_count(n);
    validate_spec(spec);
    std::vector<unsigned char> outcomes(n, 0);
    parallel_for_indexed(n, parallelism, [&](std::uint64_t i) {
        const OperatingCondition c = sample_operating_condition(spec, rollout_seed(base_seed, i));
        outcomes[i] = static_cast<unsigned char>(run_rollout(policy, c, thresholds, limits).outcome);
    });
    CapabilityEstimate est;
    est.trials = n;
    for (std::uint64_t i = 0; i < n; ++i) est.successes += outcomes[i];
    est.p_hat = static_cast<double>(est.successes) / static_cast<double>(n);
    est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
    return est;
}

MarginalCapabilities estimate_marginal_capabilities(const PolicySpec& policy,
                                                    const ConditionSpec& spec,
                                                    const SafetyThresholds& thresholds,
                                                    const EnvLimits& limits, std::uint64_t n,
                                                    std::uint64_t base_seed, int parallelism) {
    check_rollout_count(n);
    validate_spec(spec);
    std::vector<SafetyVerdict> verdicts(n);
    parallel_for_indexed(n, parallelism, [&](std::uint64_t i) {
        const OperatingCondition c = sample_operating_condition(spec, rollout_seed(base_seed, i));
        verdicts[i] = run_rollout(policy, c, thresholds, limits).verdict;
    });
    MarginalCapabilities m;
    m.trials = n;
    std::array<std::uint64_t, kNumSafetyConstraints> flag_counts{};
    std::uint64_t joint = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        for (int j = 0; j < kNumSafetyConstraints; ++j)
            flag_counts[j] += verdicts[i].flags[j] ? 1 : 0;
        joint += verdicts[i].safe ? 1 : 0;
    }
    for (int j = 0; j < kNumSafetyConstraints; ++j)
        m.marginal[j] = static_cast<double>(flag_counts[j]) / static_cast<double>(n);
    m.joint = static_cast<double>(joint) / static_cast<double>(n);
    return m;
}

double estimate_robust_capability(const PolicySpec& policy,
                                  const std::vector<WeightedCondition>& grid,
                                  const SafetyThresholds& thresholds, const EnvLimits& limits,
                                  std::uint64_t n_per_condition, std::uint64_t base_seed,
                                  int parallelism) {
    if (grid.empty()) throw ConfigError("robust capability: condition grid is empty");
    double weight_sum = 0.0;
    for (const auto& wc : grid) {
        if (!(std::isfinite(wc.weight)) || wc.weight < 0.0)
            throw ConfigError("robust capability: weights must be nonnegative");
        weight_sum += wc.weight;
    }
    if (std::fabs(weight_sum - 1.0) > 1e-9)
        throw ConfigError("robust capability: weights must sum to 1");

    double total = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const CapabilityEstimate est =
            estimate_capability(policy, grid[j].spec, thresholds, limits, n_per_condition,
                                rollout_seed(base_seed, j), parallelism);
        total += grid[j].weight * est.p_hat;
    }
    return total;
}

}  // namespace landerval
