#pragma once

// Semi-infinite quadrature for
//   I(n, x) = int_0^inf t^n / (e^{2 pi t} - 1) sin(x t + n pi/2) dt
// and the zeta integral int_0^inf t^{s-1}/(e^t - 1) dt.

#include "expderiv/derivatives.hpp"

#include <functional>

namespace expderiv {

struct QuadPolicy {
    double abs_tol = 1e-13;
    int max_panels = 20000;
};

struct QuadratureResult {
    double value = 0.0;
    /// Panel-rule error plus the analytic tail bound beyond truncation_point.
    double abs_err_estimate = 0.0;
    double truncation_point = 0.0;
    long n_evals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. The interval is first
/// cut into equal panels no wider than max_panel_width; the panel with the
/// largest |K15 - G7| is bisected until the summed estimate is <= abs_tol.
/// Throws ConvergenceError when max_panels is hit or rounding dominates.
/// The returned truncation_point is b.
QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                        double max_panel_width, double abs_tol, int max_panels);

/// Integrand of I(n, x); the t = 0 value is the analytic limit.
double boyadzhiev_integrand(int n, double x, double t);

/// Upper bound on int_T^inf t^n / (e^{2 pi t} - 1) dt.
double boyadzhiev_tail_bound(int n, double T);

/// Smallest T (starting from max(1, (n ln max(n,2) + ln(1/abs_tol) + 1) / (2 pi)))
/// whose tail bound is <= abs_tol / 2.
double boyadzhiev_truncation_point(int n, double abs_tol);

QuadratureResult boyadzhiev_integral(int n, double x, const QuadPolicy& policy = {});
/// Integrates on [0, T] for a caller-chosen T; the tail bound at T is folded into the error.
QuadratureResult boyadzhiev_integral_truncated(int n, double x, double T, const QuadPolicy& policy = {});

/// (-1)^n n!/x^{n+1} + 2 I(n, x), n >= 1, x > 0.
EvalResult deriv_quadrature(int n, double x, const QuadPolicy& policy = {});

/// 2 I(n, x): the n-th derivative of 1/(e^x-1) - 1/x, n >= 1, x > 0.
EvalResult reg_deriv_quadrature(int n, double x, const QuadPolicy& policy = {});

/// |I(0, x) - (coth(x/2)/4 - 1/(2x))| for x > 0.
double fourier_sine_coth_check(double x, const QuadPolicy& policy = {});

/// Gamma(s) for s > 0. Integers use (s-1)! exactly, half-integers the
/// (2k)! sqrt(pi) / (4^k k!) form, everything else std::tgamma.
double gamma_function(double s);

/// zeta(s) = int_0^inf t^{s-1}/(e^t - 1) dt / Gamma(s), s > 1. policy.abs_tol
/// applies to zeta itself.
double zeta_integral(double s, const QuadPolicy& policy = {});

} // namespace expderiv
