#include "landerval/safety.hpp"

#include <cmath>

#include "landerval/errors.hpp"

namespace landerval {

SafetyVerdict evaluate_safety(const TouchdownRecord& record, const SafetyThresholds& t) {
    if (!(t.delta_x > 0.0 && t.delta_v > 0.0 && t.delta_theta > 0.0 && t.delta_vx > 0.0 &&
          t.delta_contact > 0.0))
        throw ConfigError("evaluate_safety: tolerances must be positive");

    SafetyVerdict v;
    if (!record.touched_down) return v;
    v.flags[0] = std::fabs(record.x - t.x_target) <= t.delta_x;
    v.flags[1] = std::fabs(record.vz) <= t.delta_v;
    v.flags[2] = std::fabs(record.theta) <= t.delta_theta;
    v.flags[3] = std::fabs(record.vx - t.vx_target) <= t.delta_vx;
    v.flags[4] = record.contact_left >= t.delta_contact;
    v.flags[5] = record.contact_right >= t.delta_contact;
    v.safe = v.flags[0] && v.flags[1] && v.flags[2] && v.flags[3] && v.flags[4] && v.flags[5];
    return v;
}

}  // namespace landerval
