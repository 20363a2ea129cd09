#include "expderiv/verify.hpp"

#include "expderiv/error.hpp"
#include "expderiv/format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace expderiv {

namespace {

constexpr double kCrossTol = 1e-10;
constexpr double kQuadTol = 1e-8;
constexpr double kFourierTol = 1e-10;
constexpr double kMomentTol = 1e-12;
constexpr double kMaclaurinTol = 1e-6;
constexpr double kLimitTol = 1e-6;
constexpr double kIdentityTol = 1e-12;
constexpr double kSpotTol = 1e-10;

std::vector<int> range(int lo, int hi) {
    std::vector<int> r;
    for (int i = lo; i <= hi; ++i)
        r.push_back(i);
    return r;
}

double rel_defect(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

ComparisonRecord compare(std::string check, int n, std::optional<double> x, std::string lhs_method,
                         std::string rhs_method, double defect, double tol, bool absolute) {
    ComparisonRecord r{std::move(check), n, x, std::move(lhs_method), std::move(rhs_method), defect, absolute, tol,
                       false};
    r.passed = defect <= tol;
    return r;
}

// Runs `body`; a kernel error becomes a failed record carrying the diagnostic.
void guarded(VerifyReport& report, const ComparisonRecord& on_error, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        ComparisonRecord r = on_error;
        r.check += std::string(" [") + e.what() + "]";
        r.defect = std::numeric_limits<double>::infinity();
        r.passed = false;
        report.comparisons.push_back(std::move(r));
    }
}

// x/(e^x - 1) = 1 / sum_j x^j/(j+1)!, inverted as a power series.
std::vector<ExactRational> bernoulli_by_series_division(int max_n) {
    std::vector<ExactRational> c(static_cast<std::size_t>(max_n) + 1);
    for (int j = 0; j <= max_n; ++j)
        c[static_cast<std::size_t>(j)] = ExactRational(ExactInt(1), factorial(j + 1));
    std::vector<ExactRational> a(static_cast<std::size_t>(max_n) + 1);
    a[0] = ExactRational(1);
    for (int m = 1; m <= max_n; ++m) {
        ExactRational acc;
        for (int j = 1; j <= m; ++j)
            acc += c[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(m - j)];
        a[static_cast<std::size_t>(m)] = -acc;
    }
    for (int m = 0; m <= max_n; ++m)
        a[static_cast<std::size_t>(m)] *= ExactRational(factorial(m));
    return a;
}

void suite_stirling(VerifyReport& report, const VerifyOptions& o) {
    const int max_n = o.max_n >= 0 ? o.max_n : 30;
    const StirlingTriangle t(max_n);
    for (int m = 0; m < max_n; ++m) {
        int bad = 0;
        for (int k = 1; k <= m + 1; ++k)
            if (t.at(m + 1, k) != ExactInt(k) * t.at(m, k) + t.at(m, k - 1))
                ++bad;
        report.comparisons.push_back(compare("stirling_recurrence", m + 1, std::nullopt, "table",
                                             "k*S(m,k)+S(m,k-1)", bad, 0.0, true));
    }
    for (int n = 0; n <= std::min(max_n, 10); ++n) {
        const auto counts = count_set_partitions(n);
        int bad = 0;
        for (int k = 0; k <= n; ++k)
            if (t.at(n, k) != ExactInt(static_cast<unsigned long>(counts[static_cast<std::size_t>(k)])))
                ++bad;
        report.comparisons.push_back(
            compare("stirling_enumeration", n, std::nullopt, "table", "set_partitions", bad, 0.0, true));
    }
}

void suite_equivalence(VerifyReport& report, const VerifyOptions& o) {
    const int max_n = o.max_n >= 0 ? o.max_n : 50;
    const StirlingTriangle t(max_n + 1);
    for (int n = 1; n <= max_n; ++n)
        report.comparisons.push_back(compare("closed_form_coefficients", n, std::nullopt, "eq1", "eq2",
                                             closed_form_coefficient_mismatches(n, t), 0.0, true));
}

void suite_bernoulli(VerifyReport& report, const VerifyOptions& o) {
    const int max_n = o.max_n >= 0 ? o.max_n : 30;
    const auto rec = bernoulli_table(max_n);
    const auto div = bernoulli_by_series_division(max_n);
    for (int n = 0; n <= max_n; ++n) {
        const auto i = static_cast<std::size_t>(n);
        report.comparisons.push_back(compare("bernoulli", n, std::nullopt, "recurrence", "series_division",
                                             rec[i] == div[i] ? 0.0 : 1.0, 0.0, true));
    }
}

void suite_bernoulli_zeta(VerifyReport& report, const VerifyOptions& o) {
    const int max_n = o.max_n >= 0 ? o.max_n : 25;
    for (int n = 1; n <= max_n; ++n)
        report.certificates.push_back(check_bernoulli_zeta(n, kIdentityTol));
}

void suite_euler(VerifyReport& report, const VerifyOptions& o) {
    for (int m = 1; m <= o.max_m; ++m)
        report.certificates.push_back(check_euler(m, kIdentityTol));
}

void suite_cross(VerifyReport& report, const VerifyOptions& o) {
    const auto orders = o.orders.empty() ? range(1, 15) : o.orders;
    const auto points = o.points.empty() ? std::vector<double>{0.1, 0.25, 0.5, 1, 2, 5, 10} : o.points;
    const StirlingTriangle t(*std::max_element(orders.begin(), orders.end()) + 1);
    for (int n : orders)
        for (double x : points)
            guarded(report, compare("cross", n, x, "eq1", "eq2", 0, kCrossTol, false), [&] {
                const double v1 = deriv_eq1(n, x, t).value;
                const double v2 = deriv_eq2(n, x, t).value;
                const double vs = deriv_series(n, x, o.series).value;
                report.comparisons.push_back(compare("cross", n, x, "eq1", "eq2", rel_defect(v1, v2), kCrossTol, false));
                report.comparisons.push_back(compare("cross", n, x, "eq1", "series", rel_defect(v1, vs), kCrossTol, false));
                report.comparisons.push_back(compare("cross", n, x, "eq2", "series", rel_defect(v2, vs), kCrossTol, false));
            });
}

void suite_moment(VerifyReport& report, const VerifyOptions& o) {
    const int max_n = o.max_n >= 0 ? o.max_n : 10;
    const StirlingTriangle t(max_n);
    for (int n = 0; n <= max_n; ++n)
        for (double x : {-0.5, -0.1, 0.1, 0.5, 0.9})
            report.comparisons.push_back(compare("moment", n, x, "omega", "direct_sum",
                                                 rel_defect(geometric_moment(n, x, t), direct_moment_sum(n, x)),
                                                 kMomentTol, false));
}

void suite_maclaurin(VerifyReport& report, const VerifyOptions&) {
    const StirlingTriangle t(6);
    const double params[3][2] = {{1.0, 1.0}, {2.0, 0.5}, {0.5, 3.0}};
    for (const auto& p : params) {
        const std::string name = "maclaurin(lambda=" + format_double(p[0]) + ",mu=" + format_double(p[1]) + ")";
        for (int n = 0; n <= 6; ++n) {
            const double c = fermi_maclaurin_coeff(n, p[0], p[1], t);
            const double fd = fermi_taylor_fd(n, p[0], p[1]);
            report.comparisons.push_back(
                compare(name, n, std::nullopt, "omega", "finite_difference", std::fabs(c - fd), kMaclaurinTol, true));
        }
    }
}

void suite_quadrature(VerifyReport& report, const VerifyOptions& o) {
    const auto orders = o.orders.empty() ? range(1, 8) : o.orders;
    const auto points = o.points.empty() ? std::vector<double>{0.25, 0.5, 1, 2, 5} : o.points;
    const StirlingTriangle t(*std::max_element(orders.begin(), orders.end()) + 1);
    for (int n : orders)
        for (double x : points)
            guarded(report, compare("quadrature", n, x, "quad", "eq1", 0, kQuadTol, false), [&] {
                const double q = deriv_quadrature(n, x, o.quad).value;
                const double e = deriv_eq1(n, x, t).value;
                report.comparisons.push_back(compare("quadrature", n, x, "quad", "eq1", rel_defect(q, e), kQuadTol, false));
            });
}

void suite_fourier(VerifyReport& report, const VerifyOptions& o) {
    const auto points = o.points.empty() ? std::vector<double>{0.5, 1, 2} : o.points;
    for (double x : points)
        guarded(report, compare("fourier_sine_coth", 0, x, "quad", "coth", 0, kFourierTol, true), [&] {
            report.comparisons.push_back(
                compare("fourier_sine_coth", 0, x, "quad", "coth", fourier_sine_coth_check(x, o.quad), kFourierTol, true));
        });
}

void suite_limit(VerifyReport& report, const VerifyOptions& o) {
    const auto orders = o.orders.empty() ? range(1, 6) : o.orders;
    for (int n : orders)
        guarded(report, compare("limit", n, std::nullopt, "richardson", "limit7_rhs", 0, kLimitTol, true),
                [&] { report.certificates.push_back(check_limit7(n, kLimitTol, o.quad)); });
}

void suite_spot(VerifyReport& report, const VerifyOptions& o) {
    report.comparisons.push_back(compare("B_10 == 5/66", 10, std::nullopt, "recurrence", "5/66",
                                         bernoulli(10) == ExactRational::from_string("5/66") ? 0.0 : 1.0, 0.0, true));
    report.comparisons.push_back(compare("zeta(2)", 2, std::nullopt, "zeta_series", "1.6449340668482264",
                                         std::fabs(zeta_series(2) - 1.6449340668482264), kSpotTol, true));
    const double ln2 = std::numbers::ln2;
    const StirlingTriangle t(3);
    const double values[4] = {deriv_eq1(2, ln2, t).value, deriv_eq2(2, ln2, t).value,
                              deriv_series(2, ln2, o.series).value, deriv_quadrature(2, ln2, o.quad).value};
    const char* names[4] = {"eq1", "eq2", "series", "quad"};
    for (int i = 0; i < 4; ++i)
        report.comparisons.push_back(
            compare("deriv(2, ln 2) == 6", 2, ln2, names[i], "6", rel_defect(values[i], 6.0), kSpotTol, false));
}

using SuiteFn = void (*)(VerifyReport&, const VerifyOptions&);

struct SuiteEntry {
    const char* name;
    SuiteFn fn;
};

constexpr SuiteEntry kSuites[] = {
    {"stirling", suite_stirling},     {"equivalence", suite_equivalence},
    {"bernoulli", suite_bernoulli},   {"bernoulli-zeta", suite_bernoulli_zeta},
    {"euler", suite_euler},           {"cross", suite_cross},
    {"moment", suite_moment},         {"maclaurin", suite_maclaurin},
    {"quadrature", suite_quadrature}, {"fourier", suite_fourier},
    {"limit", suite_limit},           {"spot", suite_spot},
};

} // namespace

std::vector<std::uint64_t> count_set_partitions(int n) {
    if (n < 0 || n > 14)
        throw Error(ErrorKind::Domain, "count_set_partitions supports 0 <= n <= 14");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
    if (n == 0) {
        counts[0] = 1;
        return counts;
    }
    // restricted growth string: a[0] = 0, a[i] <= 1 + max(a[0..i-1])
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
    while (true) {
        ++counts[static_cast<std::size_t>(prefix_max.back()) + 1];
        int i = n - 1;
        while (i > 0 && a[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i) - 1])
            --i;
        if (i == 0)
            break;
        ++a[static_cast<std::size_t>(i)];
        prefix_max[static_cast<std::size_t>(i)] =
            std::max(prefix_max[static_cast<std::size_t>(i) - 1], a[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            a[static_cast<std::size_t>(j)] = 0;
            prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
        }
    }
    return counts;
}

int closed_form_coefficient_mismatches(int n, const StirlingTriangle& triangle) {
    if (n < 1 || n + 1 > triangle.max_order())
        throw Error(ErrorKind::OrderOutOfRange, "closed-form comparison needs 1 <= n < triangle order");
    // lhs[k] = S(n+1,k) (k-1)!, k = 1..n+1
    // rhs = (1+u) * sum_{k=1}^{n} S(n,k) k! u^k  ->  rhs[k] = S(n,k) k! + S(n,k-1) (k-1)!
    int bad = 0;
    ExactInt fact_km1(1); // (k-1)!
    for (int k = 1; k <= n + 1; ++k) {
        if (k > 1)
            fact_km1 *= ExactInt(k - 1);
        const ExactInt lhs = triangle.at(n + 1, k) * fact_km1;
        ExactInt rhs = triangle.at(n, k) * fact_km1 * ExactInt(k);
        if (k >= 2)
            rhs += triangle.at(n, k - 1) * fact_km1;
        if (lhs != rhs)
            ++bad;
    }
    return bad;
}

double direct_moment_sum(int n, double x) {
    if (!(std::fabs(x) < 1.0) || n < 0)
        throw Error(ErrorKind::Domain, "direct_moment_sum needs |x| < 1 and n >= 0");
    const ExactRational xr{mpq_class(x)};
    ExactRational acc(n == 0 ? 1 : 0); // m = 0 term
    ExactRational power(1);
    const double ax = std::fabs(x);
    if (ax == 0.0)
        return acc.to_double();
    const double decreasing_from = n / -std::log(ax);
    for (long m = 1;; ++m) {
        power *= xr;
        ExactInt mn(1);
        const ExactInt mi(m);
        for (int j = 0; j < n; ++j)
            mn *= mi;
        const ExactRational term = ExactRational(mn) * power;
        acc += term;
        if (static_cast<double>(m) > decreasing_from) {
            const double ratio = ax * std::pow(1.0 + 1.0 / static_cast<double>(m), n);
            if (ratio < 1.0) {
                const double tail = std::fabs(term.to_double()) * ratio / (1.0 - ratio);
                if (tail < 1e-20 * std::fabs(acc.to_double()))
                    return acc.to_double();
            }
        }
        if (m > 100000)
            throw Error(ErrorKind::NonConvergence, "direct_moment_sum did not settle");
    }
}

double fermi_taylor_fd(int n, double lambda, double mu) {
    if (n < 0 || n > 8)
        throw Error(ErrorKind::UnsupportedOrder, "fermi_taylor_fd supports 0 <= n <= 8");
    const long double lam = lambda;
    const long double m = mu;
    auto f = [&](long double t) { return 1.0L / (m * std::exp(lam * t) + 1.0L); };
    auto diff = [&](long double h) {
        long double acc = 0.0L;
        for (int j = 0; j <= n; ++j) {
            const long double w = ((j % 2) ? -1.0L : 1.0L) * binomial(n, j).to_long_double();
            acc += w * f((0.5L * n - j) * h);
        }
        return acc / std::pow(h, n);
    };
    const long double h = 0.1L / std::max(std::fabs(lam), 1e-3L);
    const long double d1 = diff(h), d2 = diff(h / 2), d3 = diff(h / 4);
    const long double r1 = (4 * d2 - d1) / 3, r2 = (4 * d3 - d2) / 3;
    const long double r = (16 * r2 - r1) / 15;
    return static_cast<double>(r / factorial(n).to_long_double());
}

std::size_t VerifyReport::passed() const {
    std::size_t p = 0;
    for (const auto& c : certificates)
        p += c.passed ? 1 : 0;
    for (const auto& c : comparisons)
        p += c.passed ? 1 : 0;
    return p;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : kSuites)
            v.emplace_back(s.name);
        return v;
    }();
    return names;
}

VerifyReport run_suite(const std::string& suite, const VerifyOptions& options) {
    VerifyReport report;
    report.suite = suite;
    bool found = false;
    for (const auto& s : kSuites) {
        if (suite == "all" || suite == s.name) {
            s.fn(report, options);
            found = true;
        }
    }
    if (!found)
        throw std::invalid_argument("unknown suite '" + suite + "'");
    return report;
}

} // namespace expderiv
