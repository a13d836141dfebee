#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "landerval/beta_inference.hpp"

namespace landerval {

struct ValidationConfig {
    double p0 = 0.95;
    double tau_approve = 0.95;
    double tau_reject = 0.05;
    double prior_alpha = 1.0;
    double prior_beta = 1.0;
    int n_min = 30;
    int n_max = 100;
};

// Throws ConfigError unless 0 < tau_reject < tau_approve < 1, 0 < p0 < 1,
// the prior shapes are positive, and 1 <= n_min <= n_max.
void validate_config(const ValidationConfig& config);

enum class Decision { Continue, Approve, Reject };
enum class SessionStatus { Running, Approved, Rejected, Exhausted };

std::string to_string(Decision decision);
std::string to_string(SessionStatus status);

struct HistoryEntry {
    int n;
    int outcome;
    std::uint64_t successes;
    std::uint64_t failures;
    double q;  // posterior approval probability after this outcome
    Decision decision;
};

// Sequential approval session. Outcomes arrive one at a time; after each the
// posterior approval probability q_n is compared against the thresholds:
// Approve when q_n >= tau_approve, Reject when q_n <= tau_reject, otherwise
// Continue. Decisions are suppressed until n_min outcomes have been seen, and
// a Continue at n_max exhausts the session (a distinct terminal status, not a
// rejection). Single-writer: not safe for concurrent ingest.
class ValidationSession {
public:
    explicit ValidationSession(const ValidationConfig& config);

    // Feed one Bernoulli outcome (0 or 1) and return the resulting decision.
    // Throws std::logic_error once the session has terminated and
    // std::invalid_argument for outcomes outside {0, 1}.
    Decision ingest(int outcome);

    SessionStatus status() const { return status_; }
    const ValidationConfig& config() const { return config_; }
    int count() const { return static_cast<int>(successes_ + failures_); }
    std::uint64_t successes() const { return successes_; }
    std::uint64_t failures() const { return failures_; }
    BetaParams posterior() const;
    const std::vector<HistoryEntry>& history() const { return history_; }

    // First n with a non-Continue decision, or n_max for an exhausted
    // session. Throws std::logic_error while the session is still running.
    int stopping_time() const;

    // One JSON object per ingested outcome:
    // {"n","outcome","successes","failures","alpha","beta","q","decision"}.
    void write_jsonl(std::ostream& out) const;

private:
    ValidationConfig config_;
    SessionStatus status_ = SessionStatus::Running;
    std::uint64_t successes_ = 0;
    std::uint64_t failures_ = 0;
    std::vector<HistoryEntry> history_;
};

// 1 - mean(stopping_times) / n_max. Throws std::invalid_argument on an empty
// list or entries outside [1, n_max].
double validation_saving(const std::vector<int>& stopping_times, int n_max);

// Fixed-horizon baseline: Approve iff successes / n >= p0. Requires n >= 1.
Decision empirical_rule(std::uint64_t successes, std::uint64_t n, double p0);

}  // namespace landerval
