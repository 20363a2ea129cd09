#include "expderiv/derivatives.hpp"

#include "expderiv/error.hpp"
#include "summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace expderiv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using detail::parity_sign;

void require_closed_form_args(int n, double x, const char* what) {
    if (std::isnan(x))
        throw Error(ErrorKind::Domain, std::string(what) + ": x is NaN");
    if (x == 0.0)
        throw Error(ErrorKind::Pole, std::string(what) + ": x = 0 is a pole of 1/(e^x-1)");
    if (n < 0)
        throw Error(ErrorKind::Domain, std::string(what) + ": order must be >= 0");
    if (n > kMaxFloatOrder)
        throw Error(ErrorKind::UnsupportedOrder, std::string(what) + ": order " + std::to_string(n) +
                                                     " exceeds binary64 cap " + std::to_string(kMaxFloatOrder));
}

// e^x/(e^x - 1) = 1 + u
double one_plus_u(double x) {
    if (x > 0.0)
        return 1.0 / -std::expm1(-x);
    return std::exp(x) / std::expm1(x);
}

struct HornerSum {
    long double value;
    long double abs_value;
};

// sum_{k=1}^{K} c_k u^k with c_k given for k = 0..K (c_0 ignored).
HornerSum horner_from_one(const std::vector<long double>& c, long double u) {
    long double acc = 0.0L;
    long double abs_acc = 0.0L;
    const long double au = std::fabs(u);
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
        acc = acc * u + c[k];
        abs_acc = abs_acc * au + std::fabs(c[k]);
    }
    return {acc * u, abs_acc * au};
}

double finite_or_throw(long double v, const char* what) {
    const auto d = static_cast<double>(v);
    if (!std::isfinite(d))
        throw Error(ErrorKind::Overflow, std::string(what) + ": value exceeds binary64 range");
    return d;
}

double f_base(double t) { return inv_expm1(t); }

} // namespace

std::string_view to_string(Method m) {
    switch (m) {
    case Method::ClosedForm1: return "eq1";
    case Method::ClosedForm2: return "eq2";
    case Method::Series: return "series";
    case Method::Quadrature: return "quad";
    case Method::SmallXSeries: return "smallx";
    case Method::FiniteDifference: return "fd";
    }
    return "?";
}

std::optional<Method> method_from_string(std::string_view s) {
    for (Method m : {Method::ClosedForm1, Method::ClosedForm2, Method::Series, Method::Quadrature,
                     Method::SmallXSeries, Method::FiniteDifference})
        if (to_string(m) == s)
            return m;
    return std::nullopt;
}

double inv_expm1(double x) {
    if (x > 0.0)
        return std::exp(-x) / -std::expm1(-x);
    return 1.0 / std::expm1(x);
}

EvalResult deriv_eq1(int n, double x, const StirlingTriangle& triangle) {
    require_closed_form_args(n, x, "deriv_eq1");
    const double u = inv_expm1(x);
    if (n == 0)
        return {0, x, u, Method::ClosedForm1, kEps * std::fabs(u)};
    if (triangle.max_order() < n + 1)
        throw Error(ErrorKind::OrderOutOfRange, "deriv_eq1 needs Stirling rows up to " + std::to_string(n + 1));

    // c_k = S(n+1, k) (k-1)!
    std::vector<long double> c(static_cast<std::size_t>(n) + 2, 0.0L);
    ExactInt kfact(1);
    for (int k = 1; k <= n + 1; ++k) {
        if (k > 1)
            kfact *= ExactInt(k - 1);
        c[static_cast<std::size_t>(k)] = (triangle.at(n + 1, k) * kfact).to_long_double();
    }
    const HornerSum s = horner_from_one(c, u);
    const double value = finite_or_throw(parity_sign(n) * s.value, "deriv_eq1");
    const double err = (n + 3) * kEps * static_cast<double>(s.abs_value);
    return {n, x, value, Method::ClosedForm1, err};
}

EvalResult deriv_eq2(int n, double x, const StirlingTriangle& triangle) {
    require_closed_form_args(n, x, "deriv_eq2");
    const double u = inv_expm1(x);
    if (n == 0)
        return {0, x, u, Method::ClosedForm2, kEps * std::fabs(u)};
    if (triangle.max_order() < n)
        throw Error(ErrorKind::OrderOutOfRange, "deriv_eq2 needs Stirling rows up to " + std::to_string(n));

    const GeometricPolynomial omega = geometric_polynomial(n, triangle);
    std::vector<long double> c;
    c.reserve(omega.coeffs.size());
    for (const auto& a : omega.coeffs)
        c.push_back(a.to_long_double());
    const HornerSum s = horner_from_one(c, u);
    const long double pre = one_plus_u(x);
    const double value = finite_or_throw(parity_sign(n) * pre * s.value, "deriv_eq2");
    const double err = (n + 4) * kEps * static_cast<double>(std::fabs(pre) * s.abs_value);
    return {n, x, value, Method::ClosedForm2, err};
}

EvalResult deriv_series(int n, double x, const SeriesPolicy& policy) {
    if (!(policy.rel_tol > 0.0 && policy.rel_tol < 1.0) || policy.max_terms < 1)
        throw Error(ErrorKind::Domain, "series policy needs 0 < rel_tol < 1 and max_terms >= 1");
    if (n < 0)
        throw Error(ErrorKind::Domain, "deriv_series: order must be >= 0");
    if (!(x > 0.0))
        throw Error(ErrorKind::DivergentSeries, "deriv_series: sum k^n e^{-kx} diverges for x <= 0");

    detail::CompensatedSum sum;
    double rounding = 0.0;
    const double peak = n / x; // terms increase up to k ~ n/x
    for (long k = 1;; ++k) {
        const double kd = static_cast<double>(k);
        const double arg = n * std::log(kd) - kd * x;
        const double term = std::exp(arg);
        sum.add(term);
        rounding += (1.0 + std::fabs(arg)) * kEps * term;

        if (kd > peak) {
            const double ratio = std::exp(-x + n * std::log1p(1.0 / kd));
            if (ratio < 1.0) {
                const double partial = sum.value();
                const double tail = term * ratio / (1.0 - ratio);
                if (tail < policy.rel_tol * partial) {
                    if (!std::isfinite(partial))
                        throw Error(ErrorKind::Overflow, "deriv_series: value exceeds binary64 range");
                    return {n, x, parity_sign(n) * partial, Method::Series, tail + rounding};
                }
            }
        }
        if (k >= policy.max_terms)
            throw Error(ErrorKind::NonConvergence, "deriv_series: tail bound not reached within " +
                                                       std::to_string(policy.max_terms) + " terms");
    }
}

double geometric_moment(int n, double x, const StirlingTriangle& triangle) {
    if (!(std::fabs(x) < 1.0))
        throw Error(ErrorKind::Domain, "geometric_moment needs |x| < 1");
    if (n < 0)
        throw Error(ErrorKind::Domain, "geometric_moment: order must be >= 0");
    const GeometricPolynomial omega = geometric_polynomial(n, triangle);
    // alternating for x < 0; form the argument in extended precision
    const long double one_minus = 1.0L - x;
    return static_cast<double>(eval_geometric_polynomial(omega, x / one_minus) / one_minus);
}

double fermi_maclaurin_coeff(int n, double lambda, double mu, const StirlingTriangle& triangle) {
    if (mu == -1.0)
        throw Error(ErrorKind::SingularParameter, "fermi_maclaurin_coeff: mu = -1 makes 1/(mu+1) singular");
    if (n < 0)
        throw Error(ErrorKind::Domain, "fermi_maclaurin_coeff: order must be >= 0");
    if (n > kMaxFloatOrder)
        throw Error(ErrorKind::UnsupportedOrder, "fermi_maclaurin_coeff: order exceeds binary64 cap");
    const GeometricPolynomial omega = geometric_polynomial(n, triangle);
    const long double mu_l = mu;
    const long double w = eval_geometric_polynomial(omega, -mu_l / (mu_l + 1.0L));
    const long double r = std::pow(static_cast<long double>(lambda), n) * w /
                          ((static_cast<long double>(mu) + 1.0L) * factorial(n).to_long_double());
    return static_cast<double>(r);
}

EvalResult reg_deriv_smallx(int n, double x, int n_terms) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!(std::fabs(x) < two_pi))
        throw Error(ErrorKind::OutOfRadius, "reg_deriv_smallx needs |x| < 2 pi");
    if (n < 0)
        throw Error(ErrorKind::Domain, "reg_deriv_smallx: order must be >= 0");
    if (n_terms < 2)
        throw Error(ErrorKind::Domain, "reg_deriv_smallx: n_terms must be >= 2");

    const int last_m = n + n_terms - 1;
    const auto b = bernoulli_table(last_m + 1);
    // coefficient of x^{m-n}: B_{m+1}/(m+1)! * m!/(m-n)! = B_{m+1} / ((m+1) (m-n)!)
    std::vector<long double> coef(static_cast<std::size_t>(n_terms));
    ExactInt jfact(1);
    for (int j = 0; j < n_terms; ++j) {
        if (j > 0)
            jfact *= ExactInt(j);
        const int m = n + j;
        coef[static_cast<std::size_t>(j)] =
            (b[static_cast<std::size_t>(m) + 1] / (ExactRational(m + 1) * ExactRational(jfact))).to_long_double();
    }
    long double acc = 0.0L;
    const long double xl = x;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it)
        acc = acc * xl + *it;

    double err = 0.0;
    if (x != 0.0) {
        const long double t_last = std::fabs(coef.back() * std::pow(xl, n_terms - 1));
        const long double t_prev = std::fabs(coef[coef.size() - 2] * std::pow(xl, n_terms - 2));
        const double mm = last_m;
        const double q = x / two_pi;
        const double rho2 = q * q * ((mm + 2) * (mm + 1)) / ((mm + 2 - n) * (mm + 1 - n));
        if (!(rho2 < 1.0))
            throw Error(ErrorKind::NonConvergence, "reg_deriv_smallx: n_terms too small for a tail bound at this x");
        err = static_cast<double>(std::max(t_last, t_prev)) * rho2 / (1.0 - rho2);
    }
    const double value = static_cast<double>(acc);
    err += 4 * kEps * std::fabs(value);
    return {n, x, value, Method::SmallXSeries, err};
}

double finite_difference_oracle(int n, double x, double h) {
    if (n < 0 || n > 6)
        throw Error(ErrorKind::UnsupportedOrder, "finite_difference_oracle supports 0 <= n <= 6");
    if (!(h > 0.0))
        throw Error(ErrorKind::Domain, "finite_difference_oracle needs h > 0");
    const double half_width = 0.5 * n * h;
    if (x - half_width <= 0.0 && 0.0 <= x + half_width)
        throw Error(ErrorKind::Pole, "finite-difference stencil crosses the pole at x = 0");
    if (n == 0)
        return f_base(x);
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double w = parity_sign(j) * binomial(n, j).to_double();
        acc += w * f_base(x + (0.5 * n - j) * h);
    }
    return acc / std::pow(h, n);
}

double finite_difference_oracle(int n, double x) {
    const double h = std::pow(kEps, 1.0 / (n + 2)) * std::max(1.0, std::fabs(x));
    return finite_difference_oracle(n, x, h);
}

} // namespace expderiv
