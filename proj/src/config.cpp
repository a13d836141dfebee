#include "landerval/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "landerval/errors.hpp"

namespace landerval {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError("config: " + message); }

// Strict walker: every key consumed must be known, every value well-typed.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) fail(path_ + " must be a JSON object");
        for (const auto& item : node_.items()) remaining_.push_back(item.key());
    }

    void get(const char* key, double& out) {
        consume(key);
        if (!node_.contains(key)) return;
        const json& v = node_.at(key);
        if (!v.is_number()) fail(path_ + "." + key + " must be a number");
        out = v.get<double>();
        if (!std::isfinite(out)) fail(path_ + "." + key + " must be finite");
    }

    void get(const char* key, int& out) {
        consume(key);
        if (!node_.contains(key)) return;
        const json& v = node_.at(key);
        if (!v.is_number_integer()) fail(path_ + "." + key + " must be an integer");
        out = v.get<int>();
    }

    void get(const char* key, std::uint64_t& out) {
        consume(key);
        if (!node_.contains(key)) return;
        const json& v = node_.at(key);
        if (v.is_number_unsigned()) {
            out = v.get<std::uint64_t>();
            return;
        }
        if (v.is_number_integer()) {
            const std::int64_t t = v.get<std::int64_t>();
            if (t < 0) fail(path_ + "." + key + " must be a nonnegative integer");
            out = static_cast<std::uint64_t>(t);
            return;
        }
        fail(path_ + "." + key + " must be a nonnegative integer");
    }

    void get(const char* key, std::string& out) {
        consume(key);
        if (!node_.contains(key)) return;
        const json& v = node_.at(key);
        if (!v.is_string()) fail(path_ + "." + key + " must be a string");
        out = v.get<std::string>();
    }

    void get(const char* key, Range& out) {
        consume(key);
        if (!node_.contains(key)) return;
        const json& v = node_.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            fail(path_ + "." + key + " must be a [lo, hi] number pair");
        out.lo = v[0].get<double>();
        out.hi = v[1].get<double>();
    }

    void get(const char* key, std::vector<double>& out) {
        consume(key);
        if (!node_.contains(key)) return;
        const json& v = node_.at(key);
        if (!v.is_array()) fail(path_ + "." + key + " must be an array of numbers");
        out.clear();
        for (const json& e : v) {
            if (!e.is_number()) fail(path_ + "." + key + " must be an array of numbers");
            out.push_back(e.get<double>());
        }
    }

    const json* child(const char* key) {
        consume(key);
        if (!node_.contains(key)) return nullptr;
        return &node_.at(key);
    }

    void finish() const {
        for (const std::string& key : remaining_)
            if (!consumed(key)) fail("unknown key " + path_ + "." + key);
    }

private:
    void consume(const std::string& key) { consumed_.push_back(key); }
    bool consumed(const std::string& key) const {
        for (const std::string& c : consumed_)
            if (c == key) return true;
        return false;
    }

    const json& node_;
    std::string path_;
    std::vector<std::string> remaining_;
    std::vector<std::string> consumed_;
};

void apply_prior(const json& node, AppConfig& cfg) {
    Section s(node, "prior");
    s.get("alpha", cfg.decision.prior_alpha);
    s.get("beta", cfg.decision.prior_beta);
    s.finish();
}

void apply_decision(const json& node, AppConfig& cfg) {
    Section s(node, "decision");
    s.get("p0", cfg.decision.p0);
    s.get("tau_approve", cfg.decision.tau_approve);
    s.get("tau_reject", cfg.decision.tau_reject);
    s.get("n_min", cfg.decision.n_min);
    s.get("n_max", cfg.decision.n_max);
    s.finish();
}

void apply_thresholds(const json& node, AppConfig& cfg) {
    Section s(node, "thresholds");
    s.get("delta_x", cfg.thresholds.delta_x);
    s.get("delta_v", cfg.thresholds.delta_v);
    s.get("delta_theta", cfg.thresholds.delta_theta);
    s.get("delta_vx", cfg.thresholds.delta_vx);
    s.get("delta_contact", cfg.thresholds.delta_contact);
    s.get("x_target", cfg.thresholds.x_target);
    s.get("vx_target", cfg.thresholds.vx_target);
    s.finish();
}

void apply_environment(const json& node, AppConfig& cfg) {
    Section s(node, "environment");
    s.get("dt", cfg.limits.dt);
    s.get("max_steps", cfg.limits.max_steps);
    s.get("tumble_bound", cfg.limits.tumble_bound);
    s.get("discount", cfg.limits.discount);
    s.get("initial_x", cfg.environment.initial_x);
    s.get("initial_altitude", cfg.environment.initial_altitude);
    s.get("initial_vx", cfg.environment.initial_vx);
    s.get("initial_vz", cfg.environment.initial_vz);
    s.get("initial_pitch", cfg.environment.initial_pitch);
    s.get("initial_pitch_rate", cfg.environment.initial_pitch_rate);
    s.get("wind_mean", cfg.environment.wind_mean);
    s.get("wind_gust_sd", cfg.environment.wind_gust_sd);
    s.get("sensor_noise_sd", cfg.environment.sensor_noise_sd);
    s.get("actuator_gain", cfg.environment.actuator_gain);
    s.finish();
}

void apply_gains(const json& node, PdGains& g) {
    Section s(node, "policy.gains");
    s.get("kp_pos", g.kp_pos);
    s.get("kd_pos", g.kd_pos);
    s.get("k_vz", g.k_vz);
    s.get("kp_att", g.kp_att);
    s.get("kd_att", g.kd_att);
    s.get("touchdown_speed", g.touchdown_speed);
    s.get("flare_slope", g.flare_slope);
    s.get("tilt_floor", g.tilt_floor);
    s.get("tilt_slope", g.tilt_slope);
    s.get("tilt_cap", g.tilt_cap);
    s.get("gain_floor", g.gain_floor);
    s.get("thrust_noise", g.thrust_noise);
    s.get("elevator_noise", g.elevator_noise);
    s.get("thrust_trim_sd", g.thrust_trim_sd);
    s.get("elevator_trim_sd", g.elevator_trim_sd);
    s.finish();
}

void apply_policy(const json& node, AppConfig& cfg) {
    Section s(node, "policy");
    std::string kind;
    s.get("kind", kind);
    if (!kind.empty()) {
        if (kind == "pd_family")
            cfg.policy.kind = PolicyKind::pd_family;
        else if (kind == "synthetic_bernoulli")
            cfg.policy.kind = PolicyKind::synthetic_bernoulli;
        else if (kind == "zero_thrust")
            cfg.policy.kind = PolicyKind::zero_thrust;
        else
            fail("policy.kind must be pd_family, synthetic_bernoulli, or zero_thrust");
    }
    s.get("quality", cfg.policy.quality);
    s.get("true_p", cfg.policy.true_p);
    s.get("noise_seed_offset", cfg.policy.noise_seed_offset);
    s.get("certification_seed", cfg.certification_seed);
    if (const json* gains = s.child("gains")) apply_gains(*gains, cfg.policy.gains);
    s.finish();
}

void apply_experiment(const json& node, AppConfig& cfg) {
    Section s(node, "experiment");
    if (const json* v = s.child("validate")) {
        Section sv(*v, "experiment.validate");
        sv.get("dump_trajectories", cfg.experiment.validate.dump_trajectories);
        sv.finish();
    }
    if (const json* b = s.child("boundary")) {
        Section sb(*b, "experiment.boundary");
        sb.get("p0_values", cfg.experiment.boundary.p0_values);
        sb.finish();
    }
    if (const json* c = s.child("calibrate")) {
        Section sc(*c, "experiment.calibrate");
        sc.get("true_p_grid", cfg.experiment.calibrate.true_p_grid);
        sc.get("sessions_per_point", cfg.experiment.calibrate.sessions_per_point);
        sc.finish();
    }
    if (const json* w = s.child("sweep")) {
        Section sw(*w, "experiment.sweep");
        sw.get("ladder_count", cfg.experiment.sweep.ladder_count);
        sw.get("quality_low", cfg.experiment.sweep.quality_low);
        sw.get("quality_high", cfg.experiment.sweep.quality_high);
        sw.get("oracle_rollouts", cfg.experiment.sweep.oracle_rollouts);
        sw.finish();
    }
    s.finish();
}

}  // namespace

AppConfig default_config() {
    AppConfig cfg;
    cfg.certification_seed = 5;
    return cfg;
}

AppConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {  // parse errors and number overflow
        fail(std::string("invalid JSON: ") + e.what());
    }
    AppConfig cfg = default_config();
    Section s(root, "<root>");
    if (const json* n = s.child("prior")) apply_prior(*n, cfg);
    if (const json* n = s.child("decision")) apply_decision(*n, cfg);
    if (const json* n = s.child("thresholds")) apply_thresholds(*n, cfg);
    if (const json* n = s.child("environment")) apply_environment(*n, cfg);
    if (const json* n = s.child("policy")) apply_policy(*n, cfg);
    if (const json* n = s.child("experiment")) apply_experiment(*n, cfg);
    s.finish();
    validate_app_config(cfg);
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    if (path.empty()) {
        AppConfig cfg = default_config();
        validate_app_config(cfg);
        return cfg;
    }
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate_app_config(const AppConfig& cfg) {
    validate_config(cfg.decision);
    if (!(cfg.thresholds.delta_x > 0.0 && cfg.thresholds.delta_v > 0.0 &&
          cfg.thresholds.delta_theta > 0.0 && cfg.thresholds.delta_vx > 0.0 &&
          cfg.thresholds.delta_contact > 0.0))
        fail("thresholds: tolerances must be positive");
    if (!(cfg.limits.dt > 0.0)) fail("environment.dt must be positive");
    if (cfg.limits.max_steps < 1) fail("environment.max_steps must be >= 1");
    if (!(cfg.limits.tumble_bound > 0.0)) fail("environment.tumble_bound must be positive");
    if (!(cfg.limits.discount > 0.0 && cfg.limits.discount <= 1.0))
        fail("environment.discount must lie in (0, 1]");
    validate_spec(cfg.environment);
    if (!(cfg.policy.quality >= 0.0 && cfg.policy.quality <= 1.0))
        fail("policy.quality must lie in [0, 1]");
    if (!(cfg.policy.true_p >= 0.0 && cfg.policy.true_p <= 1.0))
        fail("policy.true_p must lie in [0, 1]");
    const PdGains& g = cfg.policy.gains;
    if (!(g.gain_floor >= 0.0 && g.gain_floor <= 1.0))
        fail("policy.gains.gain_floor must lie in [0, 1]");
    if (g.thrust_noise < 0.0 || g.elevator_noise < 0.0 || g.thrust_trim_sd < 0.0 ||
        g.elevator_trim_sd < 0.0)
        fail("policy.gains: noise magnitudes must be nonnegative");
    if (cfg.experiment.validate.dump_trajectories < 0)
        fail("experiment.validate.dump_trajectories must be >= 0");
    for (double p0 : cfg.experiment.boundary.p0_values)
        if (!(p0 > 0.0 && p0 < 1.0)) fail("experiment.boundary.p0_values must lie in (0, 1)");
    if (cfg.experiment.calibrate.true_p_grid.empty())
        fail("experiment.calibrate.true_p_grid must not be empty");
    for (double p : cfg.experiment.calibrate.true_p_grid)
        if (!(p >= 0.0 && p <= 1.0)) fail("experiment.calibrate.true_p_grid must lie in [0, 1]");
    if (cfg.experiment.calibrate.sessions_per_point < 1)
        fail("experiment.calibrate.sessions_per_point must be >= 1");
    if (cfg.experiment.sweep.ladder_count < 1) fail("experiment.sweep.ladder_count must be >= 1");
    if (!(cfg.experiment.sweep.quality_low >= 0.0 &&
          cfg.experiment.sweep.quality_low <= cfg.experiment.sweep.quality_high &&
          cfg.experiment.sweep.quality_high <= 1.0))
        fail("experiment.sweep: need 0 <= quality_low <= quality_high <= 1");
    if (cfg.experiment.sweep.oracle_rollouts < 1)
        fail("experiment.sweep.oracle_rollouts must be >= 1");
}

}  // namespace landerval
