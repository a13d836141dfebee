#include <cmath>

#include "doctest.h"
#include "landerval/errors.hpp"
#include "landerval/safety.hpp"

using namespace landerval;

namespace {

TouchdownRecord clean_touchdown() {
    TouchdownRecord td;
    td.touched_down = true;
    td.contact_left = 1.0;
    td.contact_right = 1.0;
    return td;
}

}  // namespace

TEST_CASE("clean touchdown satisfies every constraint") {
    const SafetyVerdict v = evaluate_safety(clean_touchdown(), SafetyThresholds{});
    CHECK(v.safe);
    for (bool flag : v.flags) CHECK(flag);
    CHECK(bernoulli_outcome(v) == 1);
}

TEST_CASE("crash or timeout fails every constraint") {
    TouchdownRecord td;  // touched_down = false
    td.contact_left = 1.0;
    td.contact_right = 1.0;
    const SafetyVerdict v = evaluate_safety(td, SafetyThresholds{});
    CHECK_FALSE(v.safe);
    for (bool flag : v.flags) CHECK_FALSE(flag);
    CHECK(bernoulli_outcome(v) == 0);
}

TEST_CASE("comparisons are inclusive at the tolerance") {
    const SafetyThresholds t;
    TouchdownRecord td = clean_touchdown();

    td.x = t.delta_x;
    CHECK(evaluate_safety(td, t).flags[0]);
    td.x = std::nextafter(t.delta_x, 1.0);
    CHECK_FALSE(evaluate_safety(td, t).flags[0]);
    td.x = -t.delta_x;
    CHECK(evaluate_safety(td, t).flags[0]);

    td = clean_touchdown();
    td.vz = -t.delta_v;
    CHECK(evaluate_safety(td, t).flags[1]);
    td.vz = -std::nextafter(t.delta_v, 1.0);
    CHECK_FALSE(evaluate_safety(td, t).flags[1]);

    td = clean_touchdown();
    td.theta = t.delta_theta;
    CHECK(evaluate_safety(td, t).flags[2]);
    td.theta = std::nextafter(t.delta_theta, 1.0);
    CHECK_FALSE(evaluate_safety(td, t).flags[2]);

    td = clean_touchdown();
    td.vx = t.delta_vx;
    CHECK(evaluate_safety(td, t).flags[3]);
    td.vx = std::nextafter(t.delta_vx, 1.0);
    CHECK_FALSE(evaluate_safety(td, t).flags[3]);

    td = clean_touchdown();
    td.contact_left = t.delta_contact;
    td.contact_right = t.delta_contact;
    const SafetyVerdict v = evaluate_safety(td, t);
    CHECK(v.flags[4]);
    CHECK(v.flags[5]);
    td.contact_left = std::nextafter(t.delta_contact, 0.0);
    CHECK_FALSE(evaluate_safety(td, t).flags[4]);
}

TEST_CASE("one violated constraint fails only its own flag") {
    const SafetyThresholds t;
    TouchdownRecord td = clean_touchdown();
    td.vz = -0.3;
    const SafetyVerdict v = evaluate_safety(td, t);
    CHECK_FALSE(v.safe);
    CHECK(v.flags[0]);
    CHECK_FALSE(v.flags[1]);
    CHECK(v.flags[2]);
    CHECK(v.flags[3]);
    CHECK(v.flags[4]);
    CHECK(v.flags[5]);
    CHECK(bernoulli_outcome(v) == 0);
}

TEST_CASE("targets shift the acceptance window") {
    SafetyThresholds t;
    t.x_target = 1.0;
    t.vx_target = -0.1;
    TouchdownRecord td = clean_touchdown();
    td.x = 1.15;
    td.vx = -0.2;
    const SafetyVerdict v = evaluate_safety(td, t);
    CHECK(v.flags[0]);
    CHECK(v.flags[3]);
    td.x = 0.0;
    CHECK_FALSE(evaluate_safety(td, t).flags[0]);
}

TEST_CASE("nonpositive tolerances are configuration errors") {
    SafetyThresholds t;
    t.delta_theta = 0.0;
    CHECK_THROWS_AS(evaluate_safety(clean_touchdown(), t), ConfigError);
    t = SafetyThresholds{};
    t.delta_contact = -0.5;
    CHECK_THROWS_AS(evaluate_safety(clean_touchdown(), t), ConfigError);
}
