#pragma once

#include <array>

namespace landerval {

// Pad-frame tolerances for the touchdown constraints. Comparisons are
// inclusive: a reading exactly at its tolerance passes.
struct SafetyThresholds {
    double delta_x = 0.20;        // |x - x_target|
    double delta_v = 0.15;        // |vz|
    double delta_theta = 0.10;    // |theta|, radians
    double delta_vx = 0.15;       // |vx - vx_target|
    double delta_contact = 0.50;  // per-leg contact indicator floor
    double x_target = 0.0;
    double vx_target = 0.0;
};

// State captured at the interpolated touchdown instant. touched_down = false
// marks a crash or timeout; readings are then ignored and every flag is false.
struct TouchdownRecord {
    bool touched_down = false;
    double x = 0.0;
    double z = 0.0;  // ~0 at touchdown (interpolated crossing)
    double vx = 0.0;
    double vz = 0.0;
    double theta = 0.0;
    double contact_left = 0.0;
    double contact_right = 0.0;
};

inline constexpr int kNumSafetyConstraints = 6;

// Flag order used everywhere flags appear:
// position, vertical speed, pitch, horizontal speed, left contact, right contact.
struct SafetyVerdict {
    bool safe = false;  // conjunction of all six flags
    std::array<bool, kNumSafetyConstraints> flags{};
};

// Throws ConfigError on nonpositive tolerances.
SafetyVerdict evaluate_safety(const TouchdownRecord& record, const SafetyThresholds& thresholds);

// 1 when safe, else 0: the Bernoulli evidence consumed by the validator.
inline int bernoulli_outcome(const SafetyVerdict& verdict) { return verdict.safe ? 1 : 0; }

}  // namespace landerval
