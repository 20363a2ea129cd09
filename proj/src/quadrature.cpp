#include "expderiv/quadrature.hpp"

#include "expderiv/error.hpp"
#include "summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

namespace expderiv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Kronrod 15-point abscissae (descending, last is 0) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double err;
    double floor; // rounding level below which bisection cannot help
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::fabs(kron);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        const double w = kWgk[static_cast<std::size_t>(j)];
        kron += w * (f1 + f2);
        abs_sum += w * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1)
            gauss += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
    }
    const double floor = 50.0 * kEps * abs_sum * half;
    const double err = std::max(std::fabs((kron - gauss) * half), floor);
    return {a, b, kron * half, err, floor};
}

struct WorseFirst {
    bool operator()(const Panel& l, const Panel& r) const {
        if (l.err != r.err)
            return l.err < r.err;
        return l.a > r.a;
    }
};

// log of the integral bound used for the Bose-factor tail (see boyadzhiev_tail_bound).
double log_tail_bound(int n, double T) {
    const double nd = n;
    // sup_{t >= T} t^n e^{-pi t}
    const double log_sup = (nd == 0.0 || T >= nd / kPi) ? nd * std::log(T) - kPi * T
                                                      : nd * (std::log(nd / kPi) - 1.0);
    double log_bound = log_sup - kPi * T - std::log(kPi);
    // incomplete-gamma bound: int_T^inf t^n e^{-2 pi t} dt <= T^n e^{-2 pi T} / (2 pi - n/T)
    if (kTwoPi * T > nd) {
        const double lg = nd * std::log(T) - kTwoPi * T - std::log(kTwoPi - nd / T);
        log_bound = std::min(log_bound, lg);
    }
    // 1/(e^{2 pi t} - 1) <= e^{-2 pi t} / (1 - e^{-2 pi T}) for t >= T
    return log_bound - std::log(-std::expm1(-kTwoPi * T));
}

void require_positive_x(double x, const char* what) {
    if (x == 0.0)
        throw Error(ErrorKind::Pole, std::string(what) + ": x = 0 is the pole");
    if (!(x > 0.0))
        throw Error(ErrorKind::Domain, std::string(what) + ": needs x > 0");
}

} // namespace

QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                        double max_panel_width, double abs_tol, int max_panels) {
    if (!(b > a) || !(max_panel_width > 0.0) || !(abs_tol > 0.0) || max_panels < 1)
        throw Error(ErrorKind::Domain, "adaptive_gauss_kronrod: bad interval or policy");

    const auto initial = static_cast<long>(std::ceil((b - a) / max_panel_width));
    if (initial > max_panels)
        throw ConvergenceError("initial panel count " + std::to_string(initial) + " exceeds max_panels",
                               std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity());

    std::priority_queue<Panel, std::vector<Panel>, WorseFirst> queue;
    long evals = 0;
    double total_err = 0.0;
    const double width = (b - a) / static_cast<double>(initial);
    for (long i = 0; i < initial; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == initial) ? b : a + width * static_cast<double>(i + 1);
        Panel p = gk15(f, lo, hi);
        evals += 15;
        total_err += p.err;
        queue.push(p);
    }

    auto collect = [&]() {
        std::vector<Panel> panels;
        panels.reserve(queue.size());
        auto copy = queue;
        while (!copy.empty()) {
            panels.push_back(copy.top());
            copy.pop();
        }
        std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
        detail::CompensatedSum value;
        detail::CompensatedSum err;
        for (const auto& p : panels) {
            value.add(p.value);
            err.add(p.err);
        }
        return QuadratureResult{value.value(), err.value(), b, evals};
    };

    while (total_err > abs_tol) {
        const Panel worst = queue.top();
        if (static_cast<long>(queue.size()) >= max_panels || worst.err <= worst.floor) {
            const QuadratureResult best = collect();
            throw ConvergenceError("tolerance " + std::to_string(abs_tol) + " unreachable (estimate " +
                                       std::to_string(best.abs_err_estimate) + ")",
                                   best.value, best.abs_err_estimate);
        }
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        evals += 30;
        total_err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
        // re-sum occasionally so the running total does not drift
        if (queue.size() % 256 == 0) {
            total_err = 0.0;
            auto copy = queue;
            while (!copy.empty()) {
                total_err += copy.top().err;
                copy.pop();
            }
        }
    }
    return collect();
}

double boyadzhiev_integrand(int n, double x, double t) {
    if (t == 0.0) {
        if (n == 0)
            return x / kTwoPi;
        if (n == 1)
            return 1.0 / kTwoPi;
        return 0.0;
    }
    // t^n / (e^{2 pi t} - 1) = e^{n ln t - 2 pi t} / (1 - e^{-2 pi t})
    const double weight = std::exp(n * std::log(t) - kTwoPi * t) / -std::expm1(-kTwoPi * t);
    const double xt = x * t;
    switch (n % 4) {
    case 0: return weight * std::sin(xt);
    case 1: return weight * std::cos(xt);
    case 2: return -weight * std::sin(xt);
    default: return -weight * std::cos(xt);
    }
}

double boyadzhiev_tail_bound(int n, double T) {
    if (n < 0 || !(T > 0.0))
        throw Error(ErrorKind::Domain, "boyadzhiev_tail_bound needs n >= 0 and T > 0");
    return std::exp(log_tail_bound(n, T));
}

double boyadzhiev_truncation_point(int n, double abs_tol) {
    if (n < 0 || !(abs_tol > 0.0))
        throw Error(ErrorKind::Domain, "boyadzhiev_truncation_point needs n >= 0 and abs_tol > 0");
    const double nd = n;
    double T = std::max(1.0, (nd * std::log(std::max(nd, 2.0)) + std::log(1.0 / abs_tol) + 1.0) / kTwoPi);
    const double target = std::log(0.5 * abs_tol);
    while (log_tail_bound(n, T) > target)
        T += 0.25;
    return T;
}

QuadratureResult boyadzhiev_integral_truncated(int n, double x, double T, const QuadPolicy& policy) {
    if (n < 0)
        throw Error(ErrorKind::Domain, "boyadzhiev_integral: n must be >= 0");
    require_positive_x(x, "boyadzhiev_integral");
    if (!(T > 0.0))
        throw Error(ErrorKind::Domain, "boyadzhiev_integral: truncation point must be > 0");
    if (!(policy.abs_tol > 0.0) || policy.max_panels < 1)
        throw Error(ErrorKind::Domain, "quad policy needs abs_tol > 0 and max_panels >= 1");

    // at most an eighth of the sine's wavelength per panel
    const double panel = std::min(kTwoPi / (8.0 * x), 0.25);
    const auto f = [n, x](double t) { return boyadzhiev_integrand(n, x, t); };
    const double tail = boyadzhiev_tail_bound(n, T);
    try {
        QuadratureResult r = adaptive_gauss_kronrod(f, 0.0, T, panel, 0.5 * policy.abs_tol, policy.max_panels);
        r.abs_err_estimate += tail;
        return r;
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("boyadzhiev_integral(n=") + std::to_string(n) + "): " + e.what(),
                               e.best_value(), e.best_err_estimate() + tail);
    }
}

QuadratureResult boyadzhiev_integral(int n, double x, const QuadPolicy& policy) {
    if (n < 0)
        throw Error(ErrorKind::Domain, "boyadzhiev_integral: n must be >= 0");
    if (!(policy.abs_tol > 0.0))
        throw Error(ErrorKind::Domain, "quad policy needs abs_tol > 0");
    return boyadzhiev_integral_truncated(n, x, boyadzhiev_truncation_point(n, policy.abs_tol), policy);
}

EvalResult deriv_quadrature(int n, double x, const QuadPolicy& policy) {
    if (n < 1)
        throw Error(ErrorKind::Domain, "deriv_quadrature needs n >= 1");
    require_positive_x(x, "deriv_quadrature");
    if (n > kMaxFloatOrder)
        throw Error(ErrorKind::UnsupportedOrder, "deriv_quadrature: order exceeds binary64 cap");
    const QuadratureResult q = boyadzhiev_integral(n, x, policy);
    const long double pole = detail::parity_sign(n) * factorial(n).to_long_double() /
                             std::pow(static_cast<long double>(x), n + 1);
    const double value = static_cast<double>(pole + 2.0L * q.value);
    if (!std::isfinite(value))
        throw Error(ErrorKind::Overflow, "deriv_quadrature: value exceeds binary64 range");
    const double err = 2.0 * q.abs_err_estimate + 2.0 * kEps * std::fabs(value);
    return {n, x, value, Method::Quadrature, err};
}

EvalResult reg_deriv_quadrature(int n, double x, const QuadPolicy& policy) {
    if (n < 1)
        throw Error(ErrorKind::Domain, "reg_deriv_quadrature needs n >= 1");
    require_positive_x(x, "reg_deriv_quadrature");
    const QuadratureResult q = boyadzhiev_integral(n, x, policy);
    return {n, x, 2.0 * q.value, Method::Quadrature, 2.0 * q.abs_err_estimate};
}

double fourier_sine_coth_check(double x, const QuadPolicy& policy) {
    require_positive_x(x, "fourier_sine_coth_check");
    const QuadratureResult q = boyadzhiev_integral(0, x, policy);
    const double closed = 0.25 / std::tanh(0.5 * x) - 0.5 / x;
    return std::fabs(q.value - closed);
}

double gamma_function(double s) {
    if (!(s > 0.0))
        throw Error(ErrorKind::Domain, "gamma_function needs s > 0");
    if (s == std::floor(s) && s <= kMaxFloatOrder + 1)
        return factorial(static_cast<int>(s) - 1).to_double();
    const double twice = 2.0 * s;
    if (twice == std::floor(twice) && s < 100.0) {
        // s = k + 1/2: Gamma = (2k)! sqrt(pi) / (4^k k!)
        const int k = static_cast<int>(s - 0.5);
        ExactInt four_k(1);
        for (int i = 0; i < k; ++i)
            four_k *= ExactInt(4);
        const ExactRational ratio(factorial(2 * k), four_k * factorial(k));
        return static_cast<double>(ratio.to_long_double() * std::sqrt(std::numbers::pi_v<long double>));
    }
    return std::tgamma(s);
}

double zeta_integral(double s, const QuadPolicy& policy) {
    if (!(s > 1.0))
        throw Error(ErrorKind::DivergentSeries, "zeta_integral needs s > 1");
    if (!(policy.abs_tol > 0.0) || policy.max_panels < 1)
        throw Error(ErrorKind::Domain, "quad policy needs abs_tol > 0 and max_panels >= 1");

    const double gamma = gamma_function(s);
    const double tol = policy.abs_tol * gamma;
    const double a = s - 1.0;

    // int_T^inf t^a e^{-t} dt <= T^a e^{-T} / (1 - a/T) for T > a; Bose factor adds 1/(1 - e^{-T})
    auto log_tail = [a](double T) {
        return a * std::log(T) - T - std::log(1.0 - a / T) - std::log(-std::expm1(-T));
    };
    double T = std::max(2.0 * (a + 1.0), 10.0);
    while (log_tail(T) > std::log(0.25 * tol))
        T += 1.0;

    const auto f = [a](double t) {
        if (t == 0.0)
            return a == 1.0 ? 1.0 : 0.0;
        return std::exp(a * std::log(t) - t) / -std::expm1(-t);
    };

    QuadratureResult head{};
    double lo = 0.0;
    if (s < 2.0) {
        // t = v^{1/a} on [0, 1] removes the t^{a-1} endpoint singularity:
        // int_0^1 t^{a-1} g(t) dt = (1/a) int_0^1 g(v^{1/a}) dv, g(t) = t/(e^t - 1)
        const double p = 1.0 / a;
        const auto g = [p](double v) {
            if (v == 0.0)
                return 1.0;
            const double t = std::pow(v, p);
            return t / std::expm1(t);
        };
        head = adaptive_gauss_kronrod(g, 0.0, 1.0, 0.25, 0.25 * tol * a, policy.max_panels);
        head.value /= a;
        head.abs_err_estimate /= a;
        lo = 1.0;
    }
    const QuadratureResult body = adaptive_gauss_kronrod(f, lo, T, 1.0, 0.25 * tol, policy.max_panels);
    return (head.value + body.value) / gamma;
}

} // namespace expderiv
