#pragma once

// Binary64 evaluation of (d/dx)^n 1/(e^x - 1) and its companions.

#include "expderiv/combinatorics.hpp"

#include <optional>
#include <string_view>

namespace expderiv {

/// Largest order accepted by the binary64 closed-form paths (170! is the last
/// finite factorial).
inline constexpr int kMaxFloatOrder = 170;

enum class Method { ClosedForm1, ClosedForm2, Series, Quadrature, SmallXSeries, FiniteDifference };

/// Short tag used on the command line and in reports: eq1, eq2, series, quad, smallx, fd.
std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view s);

struct EvalResult {
    int order = 0;
    double point = 0.0;
    double value = 0.0;
    Method method = Method::ClosedForm1;
    double err_estimate = 0.0;
};

struct SeriesPolicy {
    double rel_tol = 1e-15;
    long max_terms = 10'000'000;
};

/// u = 1/(e^x - 1) without cancellation at either end of the real line.
double inv_expm1(double x);

/// (-1)^n sum_{k=1}^{n+1} S(n+1,k) (k-1)! u^k. The triangle must cover n + 1.
/// n = 0 returns u itself.
EvalResult deriv_eq1(int n, double x, const StirlingTriangle& triangle);

/// (-1)^n (1 + u) sum_{k=1}^{n} S(n,k) k! u^k, using e^x/(e^x-1) = 1 + u.
EvalResult deriv_eq2(int n, double x, const StirlingTriangle& triangle);

/// (-1)^n sum_{k>=1} k^n e^{-kx}, truncated once the terms decrease and the
/// geometric tail bound drops below rel_tol times the partial sum.
EvalResult deriv_series(int n, double x, const SeriesPolicy& policy = {});

/// sum_{m>=0} m^n x^m = omega_n(x/(1-x)) / (1-x), |x| < 1.
double geometric_moment(int n, double x, const StirlingTriangle& triangle);

/// Coefficient of t^n in 1/(mu e^{lambda t} + 1):
/// lambda^n omega_n(-mu/(mu+1)) / ((mu+1) n!).
double fermi_maclaurin_coeff(int n, double lambda, double mu, const StirlingTriangle& triangle);

/// n-th derivative of 1/(e^x-1) - 1/x from its Taylor series at 0, whose
/// coefficients are B_{m+1}/(m+1)!. Valid for |x| < 2 pi.
EvalResult reg_deriv_smallx(int n, double x, int n_terms = 40);

/// Central n-th difference of 1/(e^x-1) with step h over h^n, n <= 6.
double finite_difference_oracle(int n, double x, double h);
/// Same with h = eps^(1/(n+2)) max(1, |x|).
double finite_difference_oracle(int n, double x);

} // namespace expderiv
