#pragma once

#include <cstdint>

namespace landerval {

// Beta distribution parameters; both shapes must be positive and finite.
struct BetaParams {
    BetaParams(double alpha_in, double beta_in);  // throws std::invalid_argument
    double alpha;
    double beta;
};

struct CapabilitySummary {
    double mean;
    double variance;
    double approval_probability;  // P(p >= p0 | evidence)
    double false_approval_risk;   // 1 - approval_probability
};

// Conjugate update: Beta(a, b) plus (S, F) Bernoulli counts -> Beta(a+S, b+F).
// The additions are exact for counts below 2^53.
BetaParams posterior_update(const BetaParams& prior, std::uint64_t successes,
                            std::uint64_t failures);

double posterior_mean(const BetaParams& params);
double posterior_variance(const BetaParams& params);

// I_x(a, b): the Beta(a, b) CDF at x, evaluated by continued fraction with
// the prefactor in log space. Absolute error <= 1e-12 for a, b <= 500.
// Throws std::domain_error for x outside [0, 1] or nonpositive/non-finite
// shapes, NumericalError if the continued fraction fails to converge.
double regularized_incomplete_beta(double x, double a, double b);

// q = P(p >= p0 | posterior) = 1 - I_p0(alpha, beta); p0 must lie in (0, 1).
double approval_probability(const BetaParams& posterior, double p0);

// r = 1 - q = I_p0(alpha, beta).
double false_approval_risk(const BetaParams& posterior, double p0);

CapabilitySummary capability_summary(const BetaParams& posterior, double p0);

}  // namespace landerval
