#include "landerval/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "landerval/errors.hpp"
#include "landerval/parallel.hpp"
#include "landerval/report.hpp"

namespace landerval {
namespace {

// Shortest round-trip decimal form; locale-independent, so artifacts are
// byte-identical across reruns and machines.
std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out.good()) throw NumericalError("write failed for " + path.string());
}

std::filesystem::path resolve_out_dir(const RunOptions& options) {
    if (!options.out_dir.empty()) return options.out_dir;
    if (const char* env = std::getenv("LANDERVAL_OUT"); env && *env) return env;
    return "landerval_out";
}

// Outcome of rollout i within a session keyed by session_seed. Synthetic
// policies skip condition sampling; the bypass only consumes the seed.
RolloutOutcome session_rollout(const AppConfig& cfg, const PolicySpec& policy,
                               std::uint64_t session_seed, std::uint64_t i) {
    OperatingCondition cond;
    if (policy.kind != PolicyKind::synthetic_bernoulli)
        cond = sample_operating_condition(cfg.environment, rollout_seed(session_seed, i));
    else
        cond.seed = rollout_seed(session_seed, i);
    return run_rollout(policy, cond, cfg.thresholds, cfg.limits);
}

// Feeds precomputed outcomes until the session terminates.
ValidationSession run_session(const ValidationConfig& decision, const std::vector<int>& outcomes) {
    ValidationSession session(decision);
    for (int outcome : outcomes) {
        if (session.status() != SessionStatus::Running) break;
        session.ingest(outcome);
    }
    return session;
}

Decision horizon_decision(double q, const ValidationConfig& decision) {
    if (q >= decision.tau_approve) return Decision::Approve;
    if (q <= decision.tau_reject) return Decision::Reject;
    return Decision::Continue;
}

std::string controller_name(double quality) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "pd_q%.4f", quality);
    return buf;
}

nlohmann::ordered_json session_summary(const ValidationSession& session) {
    const BetaParams posterior = session.posterior();
    const double q = session.history().empty()
                         ? approval_probability(posterior, session.config().p0)
                         : session.history().back().q;
    nlohmann::ordered_json j;
    j["status"] = to_string(session.status());
    j["final_decision"] =
        session.history().empty() ? to_string(Decision::Continue)
                                  : to_string(session.history().back().decision);
    j["stopping_time"] = session.stopping_time();
    j["outcomes_ingested"] = session.count();
    j["successes"] = session.successes();
    j["failures"] = session.failures();
    j["posterior"] = {{"alpha", posterior.alpha},
                      {"beta", posterior.beta},
                      {"mean", posterior_mean(posterior)},
                      {"variance", posterior_variance(posterior)}};
    j["q"] = q;
    j["false_approval_risk"] = 1.0 - q;
    const double p_hat =
        static_cast<double>(session.successes()) / static_cast<double>(session.count());
    j["p_hat"] = p_hat;
    j["empirical_decision"] =
        to_string(empirical_rule(session.successes(), session.count(), session.config().p0));
    j["validation_saving"] =
        validation_saving({session.stopping_time()}, session.config().n_max);
    return j;
}

}  // namespace

void run_validate(const AppConfig& cfg, const RunOptions& options) {
    const std::filesystem::path out_dir = resolve_out_dir(options);
    const int n_max = cfg.decision.n_max;

    // The full horizon is generated up front (outcome i is a pure function of
    // the seed chain), then fed sequentially until the session stops. This is
    // what makes parallelism invisible in every artifact.
    std::vector<RolloutOutcome> rollouts(n_max);
    parallel_for_indexed(n_max, options.parallelism, [&](std::uint64_t i) {
        rollouts[i] = session_rollout(cfg, cfg.policy, options.base_seed, i);
    });
    std::vector<int> outcomes(n_max);
    for (int i = 0; i < n_max; ++i) outcomes[i] = rollouts[i].outcome;

    const ValidationSession session = run_session(cfg.decision, outcomes);

    std::ostringstream jsonl;
    session.write_jsonl(jsonl);
    write_file(out_dir / "session.jsonl", jsonl.str());

    std::string trace = "n,q\n";
    for (const HistoryEntry& e : session.history())
        trace += std::to_string(e.n) + "," + format_double(e.q) + "\n";
    write_file(out_dir / "q_trace.csv", trace);

    nlohmann::ordered_json summary;
    summary["command"] = "validate";
    summary["base_seed"] = options.base_seed;
    summary.update(session_summary(session));
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");

    if (cfg.policy.kind != PolicyKind::synthetic_bernoulli) {
        const int dumps = std::min(cfg.experiment.validate.dump_trajectories, n_max);
        for (int i = 0; i < dumps; ++i) {
            TrajectoryLog log;
            const OperatingCondition cond =
                sample_operating_condition(cfg.environment, rollout_seed(options.base_seed, i));
            run_rollout(cfg.policy, cond, cfg.thresholds, cfg.limits, &log);
            std::string csv = "step,t,x,z,vx,vz,theta,omega,thrust,elevator,reward\n";
            for (const TrajectorySample& s : log) {
                csv += std::to_string(s.step);
                for (double v : {s.t, s.x, s.z, s.vx, s.vz, s.theta, s.omega, s.thrust,
                                 s.elevator, s.reward})
                    csv += "," + format_double(v);
                csv += "\n";
            }
            char name[32];
            std::snprintf(name, sizeof name, "trajectory_%03d.csv", i);
            write_file(out_dir / name, csv);
        }
    }
}

void run_boundary(const AppConfig& cfg, const RunOptions& options) {
    const std::filesystem::path out_dir = resolve_out_dir(options);
    const int n_max = cfg.decision.n_max;
    const BetaParams prior(cfg.decision.prior_alpha, cfg.decision.prior_beta);

    std::vector<double> p0_values = cfg.experiment.boundary.p0_values;
    if (p0_values.empty()) p0_values.push_back(cfg.decision.p0);

    std::string csv = "p0,successes,q\n";
    nlohmann::ordered_json summary;
    summary["command"] = "boundary";
    summary["n_max"] = n_max;
    summary["tau_approve"] = cfg.decision.tau_approve;
    summary["entries"] = nlohmann::ordered_json::array();

    for (double p0 : p0_values) {
        std::optional<int> min_approving;
        for (int s = 0; s <= n_max; ++s) {
            const BetaParams posterior =
                posterior_update(prior, s, static_cast<std::uint64_t>(n_max - s));
            const double q = approval_probability(posterior, p0);
            csv += format_double(p0) + "," + std::to_string(s) + "," + format_double(q) + "\n";
            if (!min_approving && q >= cfg.decision.tau_approve) min_approving = s;
        }
        nlohmann::ordered_json entry;
        entry["p0"] = p0;
        if (min_approving)
            entry["min_approving_successes"] = *min_approving;
        else
            entry["min_approving_successes"] = nullptr;
        summary["entries"].push_back(entry);
    }
    write_file(out_dir / "boundary.csv", csv);
    write_file(out_dir / "boundary_summary.json", summary.dump(2) + "\n");
}

void run_calibrate(const AppConfig& cfg, const RunOptions& options) {
    const std::filesystem::path out_dir = resolve_out_dir(options);
    const CalibrateParams& cal = cfg.experiment.calibrate;

    std::string csv = "true_p,sessions,approve_rate,reject_rate,exhaust_rate,mean_stopping_time\n";
    for (std::size_t i = 0; i < cal.true_p_grid.size(); ++i) {
        PolicySpec synthetic;
        synthetic.kind = PolicyKind::synthetic_bernoulli;
        synthetic.true_p = cal.true_p_grid[i];
        synthetic.noise_seed_offset = cfg.policy.noise_seed_offset;

        const std::uint64_t point_seed = rollout_seed(options.base_seed, i);
        const int sessions = cal.sessions_per_point;
        std::vector<SessionStatus> status(sessions);
        std::vector<int> stopping(sessions);
        parallel_for_indexed(sessions, options.parallelism, [&](std::uint64_t j) {
            const std::uint64_t session_seed = rollout_seed(point_seed, j);
            ValidationSession session(cfg.decision);
            for (int k = 0; session.status() == SessionStatus::Running; ++k)
                session.ingest(session_rollout(cfg, synthetic, session_seed, k).outcome);
            status[j] = session.status();
            stopping[j] = session.stopping_time();
        });

        std::uint64_t approved = 0, rejected = 0, exhausted = 0, total_stop = 0;
        for (int j = 0; j < sessions; ++j) {
            approved += status[j] == SessionStatus::Approved;
            rejected += status[j] == SessionStatus::Rejected;
            exhausted += status[j] == SessionStatus::Exhausted;
            total_stop += stopping[j];
        }
        const double denom = sessions;
        csv += format_double(cal.true_p_grid[i]) + "," + std::to_string(sessions) + "," +
               format_double(approved / denom) + "," + format_double(rejected / denom) + "," +
               format_double(exhausted / denom) + "," +
               format_double(static_cast<double>(total_stop) / denom) + "\n";
    }
    write_file(out_dir / "calibration.csv", csv);
}

void run_sweep(const AppConfig& cfg, const RunOptions& options) {
    const std::filesystem::path out_dir = resolve_out_dir(options);
    const SweepParams& sw = cfg.experiment.sweep;
    const int n_max = cfg.decision.n_max;
    const BetaParams prior(cfg.decision.prior_alpha, cfg.decision.prior_beta);

    std::vector<PolicySpec> ladder =
        checkpoint_ladder(sw.ladder_count, sw.quality_low, sw.quality_high);
    for (PolicySpec& member : ladder) {
        member.gains = cfg.policy.gains;
        member.noise_seed_offset = cfg.policy.noise_seed_offset;
    }

    std::string summary_csv =
        "controller,quality,capability,capability_se,p_hat,empirical_decision,q,bayesian_decision\n";
    std::string sequential_csv = "controller,quality,stopping_rollout,final_decision\n";
    std::string rewards_csv = "controller,rollout,cumulative_reward,outcome\n";

    nlohmann::ordered_json doc;
    doc["command"] = "sweep";
    doc["base_seed"] = options.base_seed;
    doc["n_max"] = n_max;
    doc["oracle_rollouts"] = sw.oracle_rollouts;
    doc["members"] = nlohmann::ordered_json::array();

    std::vector<int> stopping_times;
    for (std::size_t m = 0; m < ladder.size(); ++m) {
        const PolicySpec& member = ladder[m];
        const std::string name = controller_name(member.quality);
        const std::uint64_t member_seed = rollout_seed(options.base_seed, m);
        const std::uint64_t horizon_seed = rollout_seed(member_seed, 0);
        const std::uint64_t oracle_seed = rollout_seed(member_seed, 1);

        std::vector<RolloutOutcome> rollouts(n_max);
        parallel_for_indexed(n_max, options.parallelism, [&](std::uint64_t i) {
            rollouts[i] = session_rollout(cfg, member, horizon_seed, i);
        });

        std::vector<int> outcomes(n_max);
        std::uint64_t successes = 0;
        for (int i = 0; i < n_max; ++i) {
            outcomes[i] = rollouts[i].outcome;
            successes += rollouts[i].outcome;
            rewards_csv += name + "," + std::to_string(i) + "," +
                           format_double(rollouts[i].cumulative_reward) + "," +
                           std::to_string(rollouts[i].outcome) + "\n";
        }

        const ValidationSession session = run_session(cfg.decision, outcomes);
        stopping_times.push_back(session.stopping_time());
        sequential_csv += name + "," + format_double(member.quality) + "," +
                          std::to_string(session.stopping_time()) + "," +
                          to_string(session.history().back().decision) + "\n";

        const BetaParams horizon_posterior =
            posterior_update(prior, successes, static_cast<std::uint64_t>(n_max) - successes);
        const double q = approval_probability(horizon_posterior, cfg.decision.p0);
        const double p_hat = static_cast<double>(successes) / static_cast<double>(n_max);
        const Decision empirical = empirical_rule(successes, n_max, cfg.decision.p0);
        const Decision bayesian = horizon_decision(q, cfg.decision);

        const CapabilityEstimate oracle =
            estimate_capability(member, cfg.environment, cfg.thresholds, cfg.limits,
                                sw.oracle_rollouts, oracle_seed, options.parallelism);

        summary_csv += name + "," + format_double(member.quality) + "," +
                       format_double(oracle.p_hat) + "," + format_double(oracle.std_error) + "," +
                       format_double(p_hat) + "," + to_string(empirical) + "," +
                       format_double(q) + "," + to_string(bayesian) + "\n";

        nlohmann::ordered_json entry;
        entry["controller"] = name;
        entry["quality"] = member.quality;
        entry["capability"] = oracle.p_hat;
        entry["capability_se"] = oracle.std_error;
        entry["horizon_successes"] = successes;
        entry["p_hat"] = p_hat;
        entry["empirical_decision"] = to_string(empirical);
        entry["q"] = q;
        entry["bayesian_decision"] = to_string(bayesian);
        entry["stopping_rollout"] = session.stopping_time();
        entry["final_decision"] = to_string(session.history().back().decision);
        doc["members"].push_back(entry);
    }
    doc["validation_saving"] = validation_saving(stopping_times, n_max);

    write_file(out_dir / "sweep_summary.csv", summary_csv);
    write_file(out_dir / "sweep_sequential.csv", sequential_csv);
    write_file(out_dir / "sweep_rewards.csv", rewards_csv);
    write_file(out_dir / "sweep.json", doc.dump(2) + "\n");
}

void run_report(const AppConfig& cfg, const RunOptions& options) {
    write_report(cfg, resolve_out_dir(options));
}

}  // namespace landerval
