#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "landerval/beta_inference.hpp"
#include "landerval/errors.hpp"
#include "landerval/rng.hpp"
#include "landerval/validator.hpp"
#include "support/session_oracle.hpp"

using namespace landerval;

namespace {

// Drives a session with a fixed outcome until it terminates or hits n_max.
ValidationSession run_constant(int outcome, const ValidationConfig& config = {}) {
    ValidationSession session(config);
    while (session.status() == SessionStatus::Running) session.ingest(outcome);
    return session;
}

// Bernoulli(p) session under the synthetic seed chain.
ValidationSession run_bernoulli(double p, std::uint64_t session_seed,
                                const ValidationConfig& config = {}) {
    ValidationSession session(config);
    std::uint64_t i = 0;
    while (session.status() == SessionStatus::Running) {
        RngStream draw(rollout_seed(session_seed, i++), 0, StreamId::synthetic_outcome);
        session.ingest(draw.next_unit() < p ? 1 : 0);
    }
    return session;
}

}  // namespace

TEST_CASE("config validation rejects inconsistent thresholds") {
    ValidationConfig c;
    CHECK_NOTHROW(validate_config(c));
    c.tau_reject = 0.96;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
    c = ValidationConfig{};
    c.p0 = 1.0;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
    c = ValidationConfig{};
    c.prior_alpha = 0.0;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
    c = ValidationConfig{};
    c.n_min = 50;
    c.n_max = 40;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
    c = ValidationConfig{};
    c.n_min = 0;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("ingest rejects outcomes outside {0, 1}") {
    ValidationSession session((ValidationConfig()));
    CHECK_THROWS_AS(session.ingest(2), std::invalid_argument);
    CHECK_THROWS_AS(session.ingest(-1), std::invalid_argument);
    CHECK(session.count() == 0);
}

TEST_CASE("terminated sessions refuse further outcomes") {
    ValidationSession session = run_constant(0);
    CHECK(session.status() == SessionStatus::Rejected);
    CHECK_THROWS_AS(session.ingest(1), std::logic_error);
}

TEST_CASE("stopping time is undefined while running") {
    ValidationSession session((ValidationConfig()));
    session.ingest(1);
    CHECK_THROWS_AS(session.stopping_time(), std::logic_error);
}

TEST_CASE("decisions are suppressed before the minimum sample size") {
    // Consecutive failures drive q far below tau_reject almost immediately,
    // yet the session must keep running until n_min outcomes have arrived.
    ValidationSession session((ValidationConfig()));
    for (int n = 1; n <= 30; ++n) {
        CHECK(session.status() == SessionStatus::Running);
        session.ingest(0);
    }
    CHECK(session.status() == SessionStatus::Rejected);
    CHECK(session.stopping_time() == 30);
    for (const HistoryEntry& e : session.history())
        if (e.n < 30) CHECK(e.decision == Decision::Continue);
}

TEST_CASE("a hopeless controller is rejected at exactly n_min") {
    ValidationSession session = run_constant(0);
    CHECK(session.status() == SessionStatus::Rejected);
    CHECK(session.stopping_time() == 30);
    CHECK(session.failures() == 30);
    CHECK(session.posterior().alpha == 1.0);
    CHECK(session.posterior().beta == 31.0);
}

TEST_CASE("thirty straight successes are still inconclusive") {
    ValidationSession session((ValidationConfig()));
    for (int i = 0; i < 30; ++i) session.ingest(1);
    CHECK(session.status() == SessionStatus::Running);
    // Posterior Beta(31, 1): approval probability 1 - 0.95^31.
    CHECK(session.history().back().q == doctest::Approx(0.7960931742542097).epsilon(1e-13));
}

TEST_CASE("a perfect run approves at 58 outcomes") {
    ValidationSession session = run_constant(1);
    CHECK(session.status() == SessionStatus::Approved);
    CHECK(session.stopping_time() == 58);
    CHECK(session.successes() == 58);
    // q first crosses 0.95 between n = 57 and n = 58.
    const std::vector<HistoryEntry>& h = session.history();
    CHECK(h[56].q == doctest::Approx(0.9489531313163967).epsilon(1e-13));
    CHECK(h[57].q == doctest::Approx(0.9515054747505769).epsilon(1e-13));
    CHECK(h[57].decision == Decision::Approve);
}

TEST_CASE("one early failure delays approval to 92 outcomes") {
    // With a uniform prior the posterior depends only on the counts, so a
    // single failure anywhere before n = 58 forces the same stopping point:
    // q(S = n - 1) first crosses 0.95 at n = 92.
    for (int failure_at : {1, 10, 30, 57}) {
        ValidationSession session((ValidationConfig()));
        int n = 0;
        while (session.status() == SessionStatus::Running)
            session.ingest(++n == failure_at ? 0 : 1);
        CHECK(session.status() == SessionStatus::Approved);
        CHECK(session.stopping_time() == 92);
        CHECK(session.history().back().q == doctest::Approx(0.9500242047573837).epsilon(1e-12));
    }
    // Under the sequential rule these are the only all-but-one-success
    // stopping points: a clean prefix has already approved at 58.
    ValidationSession session((ValidationConfig()));
    int n = 0;
    while (session.status() == SessionStatus::Running) session.ingest(++n == 60 ? 0 : 1);
    CHECK(session.stopping_time() == 58);
}

TEST_CASE("borderline sessions exhaust the budget") {
    // 96 successes in 100 keeps q strictly between the thresholds throughout.
    ValidationSession session((ValidationConfig()));
    for (int i = 0; i < 100; ++i) session.ingest(i % 25 == 0 ? 0 : 1);
    CHECK(session.status() == SessionStatus::Exhausted);
    CHECK(session.successes() == 96);
    CHECK(session.stopping_time() == 100);
    CHECK(session.history().back().q == doctest::Approx(0.5729258313927738).epsilon(1e-12));
    CHECK(session.history().back().decision == Decision::Continue);
    // The fixed-horizon baseline approves the same record.
    CHECK(empirical_rule(session.successes(), 100, 0.95) == Decision::Approve);
}

TEST_CASE("session q matches the independent binomial identity") {
    // Under a uniform prior, q_n = P(Bin(n + 1, p0) <= S). One failure per
    // twenty outcomes keeps the session in the continue band through n = 40.
    ValidationSession session((ValidationConfig()));
    for (int n = 1; n <= 40; ++n) session.ingest(n % 20 == 0 ? 0 : 1);
    for (const HistoryEntry& e : session.history()) {
        const double expected =
            oracle::binomial_q(e.successes, static_cast<std::uint64_t>(e.n), 0.95);
        CHECK(e.q == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("informative priors shift the decision boundary") {
    ValidationConfig config;
    config.prior_alpha = 20.0;
    config.prior_beta = 1.0;
    ValidationSession session = run_constant(1, config);
    // All-success posterior is Beta(20 + n, 1); q = 1 - p0^(20+n) first
    // crosses 0.95 at 20 + n = 59, nineteen outcomes earlier than under
    // the uniform prior.
    CHECK(session.status() == SessionStatus::Approved);
    CHECK(session.stopping_time() == 39);

    config = ValidationConfig{};
    config.tau_approve = 0.99;
    ValidationSession strict = run_constant(1, config);
    CHECK(strict.stopping_time() > 58);  // stricter threshold needs more evidence
}

TEST_CASE("replayed sessions are identical") {
    ValidationSession a = run_bernoulli(0.97, 404);
    ValidationSession b = run_bernoulli(0.97, 404);
    CHECK(a.status() == b.status());
    CHECK(a.count() == b.count());
    REQUIRE(a.history().size() == b.history().size());
    for (std::size_t i = 0; i < a.history().size(); ++i) {
        CHECK(a.history()[i].q == b.history()[i].q);
        CHECK(a.history()[i].decision == b.history()[i].decision);
    }
}

TEST_CASE("session log lines carry the full posterior trace") {
    ValidationSession session((ValidationConfig()));
    session.ingest(1);
    session.ingest(0);
    std::ostringstream out;
    session.write_jsonl(out);
    const std::string text = out.str();
    CHECK(text.find("\"n\":1") != std::string::npos);
    CHECK(text.find("\"n\":2") != std::string::npos);
    CHECK(text.find("\"outcome\":0") != std::string::npos);
    CHECK(text.find("\"alpha\":2") != std::string::npos);
    CHECK(text.find("\"beta\":2") != std::string::npos);
    CHECK(text.find("\"decision\":\"continue\"") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("decision and status names are stable") {
    CHECK(to_string(Decision::Approve) == "approve");
    CHECK(to_string(Decision::Reject) == "reject");
    CHECK(to_string(Decision::Continue) == "continue");
    CHECK(to_string(SessionStatus::Exhausted) == "exhausted");
    CHECK(to_string(SessionStatus::Approved) == "approved");
}

TEST_CASE("validation saving compares mean stopping time to the budget") {
    CHECK(validation_saving({100, 100, 100}, 100) == 0.0);
    CHECK(validation_saving({58}, 100) == doctest::Approx(0.42).epsilon(1e-15));
    CHECK(validation_saving({30, 100}, 100) == doctest::Approx(0.35).epsilon(1e-15));
    CHECK_THROWS_AS(validation_saving({}, 100), std::invalid_argument);
    CHECK_THROWS_AS(validation_saving({0}, 100), std::invalid_argument);
    CHECK_THROWS_AS(validation_saving({101}, 100), std::invalid_argument);
}

TEST_CASE("empirical rule thresholds the success frequency") {
    CHECK(empirical_rule(95, 100, 0.95) == Decision::Approve);
    CHECK(empirical_rule(94, 100, 0.95) == Decision::Reject);
    CHECK(empirical_rule(19, 20, 0.95) == Decision::Approve);
    CHECK_THROWS_AS(empirical_rule(0, 0, 0.95), std::invalid_argument);
}

TEST_CASE("stopping-time distribution matches exact enumeration") {
    // Forward dynamic program over (n, successes) reachable states, versus
    // Monte Carlo sessions. Agreement within ~4 binomial standard errors.
    const ValidationConfig config;
    const int sessions = 8000;
    for (double p : {0.90, 0.99}) {
        const oracle::SessionDistribution exact = oracle::exact_session_distribution(p, config);
        int approved = 0;
        int rejected = 0;
        double stop_sum = 0.0;
        for (int s = 0; s < sessions; ++s) {
            ValidationSession session = run_bernoulli(p, rollout_seed(606, s));
            approved += session.status() == SessionStatus::Approved;
            rejected += session.status() == SessionStatus::Rejected;
            stop_sum += session.stopping_time();
        }
        const double n = sessions;
        const double se_a = std::sqrt(exact.approve * (1.0 - exact.approve) / n);
        const double se_r = std::sqrt(exact.reject * (1.0 - exact.reject) / n);
        CHECK(std::fabs(approved / n - exact.approve) <= 4.0 * se_a + 1e-9);
        CHECK(std::fabs(rejected / n - exact.reject) <= 4.0 * se_r + 1e-9);
        CHECK(std::fabs(stop_sum / n - exact.mean_stopping_time) < 1.0);
    }
}

TEST_CASE("frozen operating points of the exact distribution") {
    const ValidationConfig config;
    const oracle::SessionDistribution weak = oracle::exact_session_distribution(0.90, config);
    CHECK(weak.approve == doctest::Approx(0.002616176991261687).epsilon(1e-10));
    CHECK(weak.reject == doctest::Approx(0.8278498913750038).epsilon(1e-10));
    CHECK(weak.approve + weak.reject + weak.exhaust == doctest::Approx(1.0).epsilon(1e-12));

    const oracle::SessionDistribution strong = oracle::exact_session_distribution(0.99, config);
    CHECK(strong.approve == doctest::Approx(0.7906632372597575).epsilon(1e-10));
    CHECK(strong.mean_stopping_time == doctest::Approx(74.64848702892262).epsilon(1e-10));

    // At p = 0.40 a vanishing fraction (~1e-8) of sessions survives past the
    // safeguard, so the rejection rate and mean stopping time are only
    // almost-exactly their limiting values.
    const oracle::SessionDistribution hopeless = oracle::exact_session_distribution(0.40, config);
    CHECK(hopeless.reject == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(hopeless.mean_stopping_time == doctest::Approx(30.0).epsilon(1e-6));
}

TEST_CASE("approval region is monotone in the success count") {
    // At n = 100 the smallest approving success count is 99.
    for (int s = 90; s <= 100; ++s) {
        const BetaParams posterior{1.0 + s, 1.0 + (100 - s)};
        const double q = approval_probability(posterior, 0.95);
        if (s <= 98) CHECK(q < 0.95);
        if (s >= 99) CHECK(q >= 0.95);
    }
}
