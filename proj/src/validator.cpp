#include "landerval/validator.hpp"

#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "landerval/errors.hpp"

namespace landerval {

void validate_config(const ValidationConfig& c) {
    if (!(c.p0 > 0.0 && c.p0 < 1.0))
        throw ConfigError("decision config: p0 must lie in (0, 1)");
    if (!(c.tau_reject > 0.0 && c.tau_reject < c.tau_approve && c.tau_approve < 1.0))
        throw ConfigError("decision config: need 0 < tau_reject < tau_approve < 1");
    if (!(c.prior_alpha > 0.0 && c.prior_beta > 0.0))
        throw ConfigError("decision config: prior shapes must be positive");
    if (!(c.n_min >= 1 && c.n_min <= c.n_max))
        throw ConfigError("decision config: need 1 <= n_min <= n_max");
}

std::string to_string(Decision decision) {
    switch (decision) {
        case Decision::Continue: return "continue";
        case Decision::Approve: return "approve";
        case Decision::Reject: return "reject";
    }
    return "continue";
}

std::string to_string(SessionStatus status) {
    switch (status) {
        case SessionStatus::Running: return "running";
        case SessionStatus::Approved: return "approved";
        case SessionStatus::Rejected: return "rejected";
        case SessionStatus::Exhausted: return "exhausted";
    }
    return "running";
}

ValidationSession::ValidationSession(const ValidationConfig& config) : config_(config) {
    validate_config(config_);
    history_.reserve(config_.n_max);
}

BetaParams ValidationSession::posterior() const {
    return posterior_update(BetaParams(config_.prior_alpha, config_.prior_beta), successes_,
                            failures_);
}

Decision ValidationSession::ingest(int outcome) {
    if (status_ != SessionStatus::Running)
        throw std::logic_error("ingest: session already terminated (" + to_string(status_) + ")");
    if (outcome != 0 && outcome != 1)
        throw std::invalid_argument("ingest: outcome must be 0 or 1");

    outcome ? ++successes_ : ++failures_;
    const int n = count();
    const double q = approval_probability(posterior(), config_.p0);

    Decision decision = Decision::Continue;
    if (n >= config_.n_min) {  // decisions suppressed before the safeguard
        if (q >= config_.tau_approve)
            decision = Decision::Approve;
        else if (q <= config_.tau_reject)
            decision = Decision::Reject;
    }

    if (decision == Decision::Approve)
        status_ = SessionStatus::Approved;
    else if (decision == Decision::Reject)
        status_ = SessionStatus::Rejected;
    else if (n >= config_.n_max)
        status_ = SessionStatus::Exhausted;

    history_.push_back({n, outcome, successes_, failures_, q, decision});
    return decision;
}

int ValidationSession::stopping_time() const {
    switch (status_) {
        case SessionStatus::Running:
            throw std::logic_error("stopping_time: session still running");
        case SessionStatus::Exhausted:
            return config_.n_max;
        case SessionStatus::Approved:
        case SessionStatus::Rejected:
            return history_.back().n;
    }
    throw std::logic_error("stopping_time: unreachable");
}

void ValidationSession::write_jsonl(std::ostream& out) const {
    for (const HistoryEntry& e : history_) {
        nlohmann::ordered_json line{{"n", e.n},
                                    {"outcome", e.outcome},
                                    {"successes", e.successes},
                                    {"failures", e.failures},
                                    {"alpha", config_.prior_alpha + static_cast<double>(e.successes)},
                                    {"beta", config_.prior_beta + static_cast<double>(e.failures)},
                                    {"q", e.q},
                                    {"decision", to_string(e.decision)}};
        out << line.dump() << '\n';
    }
}

double validation_saving(const std::vector<int>& stopping_times, int n_max) {
    if (stopping_times.empty())
        throw std::invalid_argument("validation_saving: empty stopping-time list");
    if (n_max < 1) throw std::invalid_argument("validation_saving: n_max must be >= 1");
    double total = 0.0;
    for (int n : stopping_times) {
        if (n < 1 || n > n_max)
            throw std::invalid_argument("validation_saving: stopping time outside [1, n_max]");
        total += n;
    }
    return 1.0 - total / (static_cast<double>(n_max) * static_cast<double>(stopping_times.size()));
}

Decision empirical_rule(std::uint64_t successes, std::uint64_t n, double p0) {
    if (n == 0) throw std::invalid_argument("empirical_rule: n must be >= 1");
    if (successes > n) throw std::invalid_argument("empirical_rule: successes exceed n");
    if (!(p0 > 0.0 && p0 < 1.0))
        throw std::invalid_argument("empirical_rule: p0 must lie in (0, 1)");
    return static_cast<double>(successes) / static_cast<double>(n) >= p0 ? Decision::Approve
                                                                         : Decision::Reject;
}

}  // namespace landerval
