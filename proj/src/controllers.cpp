#include "landerval/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "landerval/errors.hpp"

namespace landerval {

double pd_descent_speed(const PdGains& gains, double altitude) {
    return -(gains.touchdown_speed + gains.flare_slope * std::max(altitude, 0.0));
}

ControlInput act(const PolicySpec& policy, const LanderState& observed, RngStream& noise) {
    switch (policy.kind) {
        case PolicyKind::zero_thrust:
            return {0.0, 0.0};
        case PolicyKind::synthetic_bernoulli:
            // Dynamics are bypassed for this kind; see run_rollout.
            return {0.0, 0.0};
        case PolicyKind::pd_family:
            break;
    }

    const PdGains& g = policy.gains;
    const double quality = std::clamp(policy.quality, 0.0, 1.0);
    const double scale = g.gain_floor + (1.0 - g.gain_floor) * quality;
    const double z = std::max(observed.z, 0.0);

    // Vertical loop: track the descent-speed reference; at zero error this
    // reduces to the hover feedforward g / (kMaxThrustAccel * cos(theta)).
    const double az_des = scale * g.k_vz * (pd_descent_speed(g, z) - observed.vz);
    const double ct = std::max(std::cos(observed.theta), 0.2);
    double thrust = (kGravity + az_des) / (kMaxThrustAccel * ct);

    // Lateral loop: desired tilt from pad-frame position/velocity errors,
    // authority shrinking with altitude so the craft lands upright.
    const double tilt_limit = std::min(g.tilt_cap, g.tilt_floor + g.tilt_slope * z);
    const double theta_des =
        std::clamp(scale * (-g.kp_pos * observed.x - g.kd_pos * observed.vx), -tilt_limit,
                   tilt_limit);
    double elevator = scale * (g.kp_att * (theta_des - observed.theta) - g.kd_att * observed.omega);

    thrust += policy.thrust_trim;
    elevator += policy.elevator_trim;
    if (quality < 1.0) {
        thrust += g.thrust_noise * (1.0 - quality) * noise.next_normal();
        elevator += g.elevator_noise * (1.0 - quality) * noise.next_normal();
    }
    return {std::clamp(thrust, 0.0, 1.0), std::clamp(elevator, -1.0, 1.0)};
}

RolloutOutcome synthetic_outcome(const PolicySpec& policy, std::uint64_t seed) {
    if (policy.kind != PolicyKind::synthetic_bernoulli)
        throw std::logic_error("synthetic_outcome: policy kind is not synthetic_bernoulli");
    if (!(policy.true_p >= 0.0 && policy.true_p <= 1.0))
        throw ConfigError("synthetic_bernoulli: true_p must lie in [0, 1]");

    RngStream draw(seed, policy.noise_seed_offset, StreamId::synthetic_outcome);
    const bool success = draw.next_unit() < policy.true_p;  // true_p = 1 always succeeds

    RolloutOutcome out;
    out.seed = seed;
    out.steps = 0;
    out.termination = TerminationKind::touchdown;
    out.touchdown.touched_down = true;
    if (success) {
        out.touchdown.contact_left = 1.0;
        out.touchdown.contact_right = 1.0;
        out.cumulative_reward = 100.0;
    } else {
        out.touchdown.x = 1.0;
        out.touchdown.vx = 0.5;
        out.touchdown.vz = -1.0;
        out.touchdown.theta = 0.5;
        out.cumulative_reward = -100.0;
    }
    // Caller evaluates the record against the live thresholds, which keeps
    // outcome == bernoulli_outcome(evaluate_safety(touchdown, thresholds)).
    return out;
}

std::vector<PolicySpec> checkpoint_ladder(int count, double quality_low, double quality_high) {
    if (count < 1) throw ConfigError("checkpoint_ladder: count must be >= 1");
    if (!(quality_low >= 0.0 && quality_low <= quality_high && quality_high <= 1.0))
        throw ConfigError("checkpoint_ladder: need 0 <= low <= high <= 1");

    std::vector<PolicySpec> ladder;
    ladder.reserve(count);
    for (int i = 0; i < count; ++i) {
        PolicySpec spec;
        spec.kind = PolicyKind::pd_family;
        spec.quality = count == 1 ? quality_low
                                  : quality_low + (quality_high - quality_low) *
                                                      static_cast<double>(i) /
                                                      static_cast<double>(count - 1);
        ladder.push_back(spec);
    }
    return ladder;
}

}  // namespace landerval
