#pragma once

#include <cstdint>
#include <vector>

#include "landerval/env.hpp"

namespace landerval {

enum class PolicyKind { pd_family, synthetic_bernoulli, zero_thrust };

// Gains for the PD family. The defaults were frozen after the Monte Carlo
// capability oracle certified the quality ladder (see README); quality scales
// the gains down and the action noise up.
struct PdGains {
    double kp_pos = 0.55;         // lateral position -> desired tilt
    double kd_pos = 1.30;         // lateral velocity damping
    double k_vz = 4.0;            // vertical-speed error -> vertical accel
    double kp_att = 8.0;          // tilt error -> elevator
    double kd_att = 3.0;          // pitch-rate damping
    double touchdown_speed = 0.05;  // |vz| target at z = 0
    double flare_slope = 0.35;      // vz_ref = -(touchdown_speed + flare_slope * z)
    double tilt_floor = 0.06;       // tilt authority at z = 0, below delta_theta
    double tilt_slope = 0.60;
    double tilt_cap = 0.35;
    double gain_floor = 0.35;       // gain scale at quality 0
    double thrust_noise = 0.22;     // per-step action-noise sd at quality 0
    double elevator_noise = 0.45;
    double thrust_trim_sd = 0.115;  // per-rollout trim-bias sd at quality 0
    double elevator_trim_sd = 0.55;
};

struct PolicySpec {
    PolicyKind kind = PolicyKind::pd_family;
    double quality = 1.0;  // pd_family knob in [0, 1]
    double true_p = 0.95;  // synthetic_bernoulli success probability
    std::uint64_t noise_seed_offset = 0;
    PdGains gains;
    // Per-rollout actuation trim, drawn by the rollout loop (not from config):
    // a miscalibration held for a whole episode, so it cannot average out the
    // way the per-step noise does.
    double thrust_trim = 0.0;
    double elevator_trim = 0.0;
};

// Descent-speed reference tracked by the PD family.
double pd_descent_speed(const PdGains& gains, double altitude);

// Action from the observed (possibly noise-corrupted) state. Deterministic
// given the stream state; quality = 1 draws no noise. At zero tracking error
// the PD family commands elevator 0 and the hover feedforward
// thrust = g / (kMaxThrustAccel * cos(theta)).
ControlInput act(const PolicySpec& policy, const LanderState& observed, RngStream& noise);

// Bypass outcome for synthetic_bernoulli: a Bernoulli(true_p) draw keyed by
// (seed, noise_seed_offset) attached to a canned safe or unsafe touchdown
// record. Throws std::logic_error for other policy kinds, ConfigError when
// true_p lies outside [0, 1].
RolloutOutcome synthetic_outcome(const PolicySpec& policy, std::uint64_t seed);

// `count` PD members with quality evenly spaced from quality_low to
// quality_high (inclusive). Requires count >= 1 and 0 <= low <= high <= 1.
std::vector<PolicySpec> checkpoint_ladder(int count, double quality_low, double quality_high);

}  // namespace landerval
