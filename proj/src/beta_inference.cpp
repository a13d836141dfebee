#include "landerval/beta_inference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "landerval/errors.hpp"

namespace landerval {
namespace {

// Lentz's algorithm for the continued fraction of I_x(a, b). Stops when the
// relative step is within 1e-14; a hard cap of 500 iterations turns
// non-convergence into a NumericalError instead of a silent bad value.
constexpr double kStepTol = 1e-14;
constexpr int kMaxIterations = 500;
constexpr double kTiny = 1e-30;

double continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double f = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        f *= d * c;
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < kStepTol) return f;
    }
    throw NumericalError("regularized_incomplete_beta: continued fraction did not converge (x=" +
                         std::to_string(x) + ", a=" + std::to_string(a) + ", b=" +
                         std::to_string(b) + ")");
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

void check_shapes(const char* who, double a, double b) {
    if (!(std::isfinite(a) && a > 0.0) || !(std::isfinite(b) && b > 0.0))
        throw std::domain_error(std::string(who) + ": shapes must be positive and finite");
}

void check_p0(const char* who, double p0) {
    if (!(p0 > 0.0 && p0 < 1.0))
        throw std::domain_error(std::string(who) + ": p0 must lie in (0, 1)");
}

}  // namespace

BetaParams::BetaParams(double alpha_in, double beta_in) : alpha(alpha_in), beta(beta_in) {
    if (!(std::isfinite(alpha) && alpha > 0.0) || !(std::isfinite(beta) && beta > 0.0))
        throw std::invalid_argument("BetaParams: shapes must be positive and finite");
}

BetaParams posterior_update(const BetaParams& prior, std::uint64_t successes,
                            std::uint64_t failures) {
    return BetaParams(prior.alpha + static_cast<double>(successes),
                      prior.beta + static_cast<double>(failures));
}

double posterior_mean(const BetaParams& params) {
    return params.alpha / (params.alpha + params.beta);
}

double posterior_variance(const BetaParams& params) {
    const double s = params.alpha + params.beta;
    return params.alpha * params.beta / (s * s * (s + 1.0));
}

double regularized_incomplete_beta(double x, double a, double b) {
    check_shapes("regularized_incomplete_beta", a, b);
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("regularized_incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    // The fraction converges fastest below the distribution mode; past it,
    // use the symmetry I_x(a, b) = 1 - I_{1-x}(b, a).
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(log_front) * continued_fraction(x, a, b) / a;
    return 1.0 - std::exp(log_front) * continued_fraction(1.0 - x, b, a) / b;
}

double approval_probability(const BetaParams& posterior, double p0) {
    check_p0("approval_probability", p0);
    return 1.0 - regularized_incomplete_beta(p0, posterior.alpha, posterior.beta);
}

double false_approval_risk(const BetaParams& posterior, double p0) {
    check_p0("false_approval_risk", p0);
    return regularized_incomplete_beta(p0, posterior.alpha, posterior.beta);
}

CapabilitySummary capability_summary(const BetaParams& posterior, double p0) {
    check_p0("capability_summary", p0);
    const double risk = regularized_incomplete_beta(p0, posterior.alpha, posterior.beta);
    return CapabilitySummary{posterior_mean(posterior), posterior_variance(posterior),
                             1.0 - risk, risk};
}

}  // namespace landerval
