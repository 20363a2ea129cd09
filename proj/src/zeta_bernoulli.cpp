#include "expderiv/zeta_bernoulli.hpp"

#include "expderiv/error.hpp"
#include "expderiv/format.hpp"
#include "summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace expderiv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(n pi / 2) for integer n
int quarter_turn_sine(int n) {
    switch (((n % 4) + 4) % 4) {
    case 1: return 1;
    case 3: return -1;
    default: return 0;
    }
}

double relative_defect(double lhs, double rhs) {
    return std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
}

} // namespace

std::string_view to_string(IdentityId id) {
    switch (id) {
    case IdentityId::Limit7: return "limit";
    case IdentityId::BernoulliZeta: return "bernoulli_zeta";
    case IdentityId::Euler2m: return "euler";
    }
    return "?";
}

double zeta_series(int s, double rel_tol) {
    if (s < 2)
        throw Error(ErrorKind::Domain, "zeta_series needs integer s >= 2");
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw Error(ErrorKind::Domain, "zeta_series needs 0 < rel_tol < 1");
    const double sd = s;
    // the partial sum is >= 1, so s K^{-s} / 2 <= rel_tol suffices
    const auto K = static_cast<long>(std::ceil(std::pow(sd / (2.0 * rel_tol), 1.0 / sd)));
    detail::CompensatedSum sum;
    // smallest terms first
    for (long k = K; k >= 1; --k)
        sum.add(std::pow(static_cast<double>(k), -sd));
    sum.add(std::pow(static_cast<double>(K), 1.0 - sd) / (sd - 1.0));
    return sum.value();
}

double bernoulli_zeta_rhs(int n) {
    if (n < 1)
        throw Error(ErrorKind::Domain, "needs n >= 1");
    const int sine = quarter_turn_sine(n);
    if (sine == 0)
        return 0.0;
    return 2.0 * sine * zeta_series(n + 1) / std::pow(kTwoPi, n + 1);
}

double limit7_rhs(int n) {
    if (n < 1)
        throw Error(ErrorKind::Domain, "limit7_rhs needs n >= 1");
    const int sine = quarter_turn_sine(n);
    if (sine == 0)
        return 0.0;
    const long double scale = factorial(n).to_long_double() / std::pow(static_cast<long double>(kTwoPi), n + 1);
    return static_cast<double>(2.0L * sine * scale * zeta_series(n + 1));
}

IdentityCertificate check_bernoulli_zeta(int n, double tol) {
    if (n < 1)
        throw Error(ErrorKind::Domain, "check_bernoulli_zeta needs n >= 1");
    const ExactRational lhs = bernoulli(n + 1) / ExactRational(factorial(n + 1));
    IdentityCertificate c;
    c.identity = IdentityId::BernoulliZeta;
    c.parameter = n;
    c.lhs = lhs.to_string();
    c.lhs_value = lhs.to_double();
    c.rhs = bernoulli_zeta_rhs(n);
    if (lhs.is_zero()) {
        c.absolute = true;
        c.rel_defect = std::fabs(c.rhs);
        c.tolerance = kZeroCaseTolerance;
    } else {
        c.rel_defect = relative_defect(c.lhs_value, c.rhs);
        c.tolerance = tol;
    }
    c.sign_agrees = (lhs.sign() > 0) == (c.rhs > 0) && (lhs.sign() < 0) == (c.rhs < 0);
    c.passed = c.rel_defect <= c.tolerance && c.sign_agrees;
    return c;
}

IdentityCertificate check_euler(int m, double tol) {
    if (m < 1)
        throw Error(ErrorKind::Domain, "check_euler needs m >= 1");
    const ExactRational b = bernoulli(2 * m);
    const int sign = (m % 2 == 1) ? 1 : -1; // (-1)^{m+1}
    const long double scale =
        factorial(2 * m).to_long_double() / std::pow(static_cast<long double>(kTwoPi), 2 * m);
    IdentityCertificate c;
    c.identity = IdentityId::Euler2m;
    c.parameter = m;
    c.lhs = b.to_string();
    c.lhs_value = b.to_double();
    c.rhs = static_cast<double>(sign * 2.0L * scale * zeta_series(2 * m));
    c.rel_defect = relative_defect(c.lhs_value, c.rhs);
    c.tolerance = tol;
    c.sign_agrees = b.sign() == (c.rhs > 0 ? 1 : (c.rhs < 0 ? -1 : 0));
    c.passed = c.rel_defect <= tol && c.sign_agrees;
    return c;
}

LimitEstimate limit7_lhs_numeric(int n, const QuadPolicy& policy) {
    if (n < 1)
        throw Error(ErrorKind::Domain, "limit7_lhs_numeric needs n >= 1");
    LimitEstimate est;
    const std::array<double, 3> xs = {1e-1, 1e-2, 1e-3};
    for (std::size_t i = 0; i < xs.size(); ++i)
        est.samples[i] = reg_deriv_quadrature(n, xs[i], policy).value;

    // f(x) = L + c x + O(x^2) with x shrinking tenfold per step
    est.previous = (10.0 * est.samples[1] - est.samples[0]) / 9.0;
    est.value = (10.0 * est.samples[2] - est.samples[1]) / 9.0;
    est.series_value = reg_deriv_smallx(n, 0.0).value;

    const double scale = std::max(1.0, std::fabs(est.value));
    const double d1 = est.samples[1] - est.samples[0];
    const double d2 = est.samples[2] - est.samples[1];
    const double noise = 1e-9 * scale;
    if (d1 * d2 < 0.0 && std::min(std::fabs(d1), std::fabs(d2)) > noise)
        throw Error(ErrorKind::UnstableLimit, "samples for n=" + std::to_string(n) + " are not monotone in x");
    if (std::fabs(est.value - est.previous) > 1e-4 * scale)
        throw Error(ErrorKind::UnstableLimit, "Richardson extrapolants disagree for n=" + std::to_string(n));
    if (std::fabs(est.value - est.series_value) > 1e-5 * std::max(1.0, std::fabs(est.series_value)))
        throw Error(ErrorKind::UnstableLimit,
                    "extrapolated limit strays from the Bernoulli series value for n=" + std::to_string(n));
    return est;
}

IdentityCertificate check_limit7(int n, double tol, const QuadPolicy& policy) {
    const LimitEstimate est = limit7_lhs_numeric(n, policy);
    IdentityCertificate c;
    c.identity = IdentityId::Limit7;
    c.parameter = n;
    c.lhs = format_double(est.value);
    c.lhs_value = est.value;
    c.rhs = limit7_rhs(n);
    c.absolute = true;
    c.rel_defect = std::fabs(est.value - c.rhs);
    c.tolerance = tol;
    c.passed = c.rel_defect <= tol;
    return c;
}

} // namespace expderiv
