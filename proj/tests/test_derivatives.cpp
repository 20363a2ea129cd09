#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "expderiv/derivatives.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace expderiv;

namespace {

const StirlingTriangle& triangle() {
    static const StirlingTriangle t = stirling_table(kMaxFloatOrder + 1);
    return t;
}

const double ln2 = std::numbers::ln2;

} // namespace

TEST_CASE("closed forms at ln 2") {
    // Derivatives of 1/(e^x-1) at e^x = 2 are (-1)^n Li_{-n}(1/2).
    const double expected[] = {1, -2, 6, -26, 150, -1082};
    for (int n = 0; n <= 5; ++n) {
        CHECK(oracle::rel_defect(deriv_eq1(n, ln2, triangle()).value, expected[n]) < 1e-15);
        CHECK(oracle::rel_defect(deriv_eq2(n, ln2, triangle()).value, expected[n]) < 1e-15);
        CHECK(oracle::rel_defect(deriv_series(n, ln2).value, expected[n]) < 1e-14);
    }
    const auto r = deriv_eq1(2, ln2, triangle());
    CHECK(r.order == 2);
    CHECK(r.point == ln2);
    CHECK(r.method == Method::ClosedForm1);
    CHECK(r.err_estimate >= 0.0);
}

TEST_CASE("large x decays") {
    const double v = deriv_eq2(1, 40.0, triangle()).value;
    CHECK(v < 0.0);
    CHECK(std::fabs(v) < 1e-16);
    CHECK(inv_expm1(800.0) == 0.0);
    CHECK(inv_expm1(-800.0) == -1.0);
    CHECK(oracle::rel_defect(inv_expm1(1e-10), 1.0 / std::expm1(1e-10)) < 1e-15);
}

TEST_CASE("method tags round-trip") {
    for (Method m : {Method::ClosedForm1, Method::ClosedForm2, Method::Series, Method::Quadrature,
                     Method::SmallXSeries, Method::FiniteDifference}) {
        CHECK(method_from_string(to_string(m)) == m);
    }
    CHECK_FALSE(method_from_string("bogus").has_value());
}

TEST_CASE("cross-method agreement against brute-force sums") {
    const double xs[] = {0.1, 0.25, 0.5, 1, 2, 5, 10};
    for (int n = 1; n <= 15; ++n) {
        for (double x : xs) {
            CAPTURE(n);
            CAPTURE(x);
            const double ref = static_cast<double>(oracle::brute_derivative(n, x));
            const auto e1 = deriv_eq1(n, x, triangle());
            const auto e2 = deriv_eq2(n, x, triangle());
            const auto s = deriv_series(n, x);
            CHECK(oracle::rel_defect(e1.value, e2.value) <= 1e-10);
            CHECK(oracle::rel_defect(e1.value, s.value) <= 1e-10);
            CHECK(oracle::rel_defect(e2.value, s.value) <= 1e-10);
            CHECK(oracle::rel_defect(e1.value, ref) <= 1e-12);
            // Reported error estimates cover the actual error, up to the
            // oracle's own rounding.
            const double slack = 1e-17 * std::fabs(ref);
            CHECK(std::fabs(e1.value - ref) <= e1.err_estimate + slack);
            CHECK(std::fabs(e2.value - ref) <= e2.err_estimate + slack);
            CHECK(std::fabs(s.value - ref) <= s.err_estimate + slack);
        }
    }
}

TEST_CASE("sign is (-1)^n for x > 0") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> logx(std::log(1e-3), std::log(50.0));
    for (int i = 0; i < 400; ++i) {
        const int n = i % 31;
        const double x = std::exp(logx(rng));
        const double v = deriv_eq1(n, x, triangle()).value;
        if (v == 0.0) continue; // underflow at large x
        CHECK((v > 0) == (n % 2 == 0));
    }
}

TEST_CASE("reflection x -> -x") {
    // 1/(e^{-x}-1) = -1 - 1/(e^x-1), so f^{(n)}(-x) = (-1)^{n+1} f^{(n)}(x) for n >= 1.
    for (int n = 1; n <= 20; ++n) {
        for (double x : {0.3, 1.0, 2.5}) {
            // u lies in (-1, 0) at negative x, so the closed-form sums alternate and
            // lose digits; the reported estimate has to account for that.
            const auto a = deriv_eq1(n, -x, triangle());
            const auto b = deriv_eq2(n, x, triangle());
            const double ref = (n % 2 == 1) ? b.value : -b.value;
            CHECK(std::fabs(a.value - ref) <= a.err_estimate + b.err_estimate);
        }
    }
}

TEST_CASE("highest supported order stays finite") {
    const double v = deriv_eq1(kMaxFloatOrder, 1.0, triangle()).value;
    CHECK(std::isfinite(v));
    CHECK(v > 0);
    CHECK(thrown_kind([] { (void)deriv_eq1(kMaxFloatOrder, 1e-3, triangle()); }) == ErrorKind::Overflow);
}

TEST_CASE("geometric moments") {
    const auto& t = triangle();
    CHECK(geometric_moment(2, 0.5, t) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(geometric_moment(0, 0.5, t) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(geometric_moment(1, 1.0 / 3.0, t) == doctest::Approx(0.75).epsilon(1e-15));
    for (int n = 0; n <= 10; ++n) {
        for (double x : {-0.5, -0.1, 0.1, 0.5, 0.9}) {
            CAPTURE(n);
            CAPTURE(x);
            CHECK(oracle::rel_defect(geometric_moment(n, x, t), oracle::exact_moment(n, x)) <= 1e-12);
        }
    }
}

TEST_CASE("Maclaurin coefficients of 1/(mu e^{lambda t} + 1)") {
    const auto& t = triangle();
    CHECK(fermi_maclaurin_coeff(0, 1, 1, t) == 0.5);
    CHECK(fermi_maclaurin_coeff(1, 1, 1, t) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(std::fabs(fermi_maclaurin_coeff(2, 1, 1, t)) < 1e-16);
    const double pairs[][2] = {{1, 1}, {2, 0.5}, {0.5, 3}};
    for (const auto& p : pairs) {
        for (int n = 0; n <= 6; ++n) {
            CAPTURE(n);
            CAPTURE(p[0]);
            CHECK(std::fabs(fermi_maclaurin_coeff(n, p[0], p[1], t) - oracle::fermi_coeff_fd(n, p[0], p[1])) <= 1e-6);
        }
    }
}

TEST_CASE("small-x Bernoulli series") {
    CHECK(reg_deriv_smallx(0, 0.0).value == -0.5);
    CHECK(reg_deriv_smallx(1, 0.0).value == doctest::Approx(1.0 / 12).epsilon(1e-15));
    CHECK(reg_deriv_smallx(2, 0.0).value == 0.0);
    for (int n = 0; n <= 8; ++n) {
        for (double x : {0.05, 0.1, 0.5}) {
            CAPTURE(n);
            CAPTURE(x);
            const auto r = reg_deriv_smallx(n, x);
            const double pole = ((n % 2 == 0) ? 1.0 : -1.0) * std::tgamma(n + 1.0) / std::pow(x, n + 1);
            const double full = r.value + pole;
            CHECK(oracle::rel_defect(full, deriv_eq1(n, x, triangle()).value) <= 1e-8);
            const double reg_ref = static_cast<double>(oracle::brute_derivative(n, x)) - pole;
            CHECK(std::fabs(r.value - reg_ref) <= r.err_estimate + 1e-9 * std::fabs(pole));
        }
    }
}

TEST_CASE("finite-difference oracle") {
    CHECK(std::fabs(finite_difference_oracle(1, ln2, 1e-4) + 2.0) < 1e-7);
    CHECK(finite_difference_oracle(0, 0.7, 0.3) == 1.0 / std::expm1(0.7));
    CHECK(oracle::rel_defect(finite_difference_oracle(2, ln2, 1e-3), 6.0) < 1e-5);
    for (int n = 1; n <= 4; ++n)
        CHECK(oracle::rel_defect(finite_difference_oracle(n, 1.0), deriv_eq1(n, 1.0, triangle()).value) < 1e-4);
}

TEST_CASE("error kinds") {
    const auto& t = triangle();
    CHECK(thrown_kind([&] { (void)deriv_eq1(1, 0.0, t); }) == ErrorKind::Pole);
    CHECK(thrown_kind([&] { (void)deriv_eq2(1, 0.0, t); }) == ErrorKind::Pole);
    CHECK(thrown_kind([&] { (void)deriv_eq1(kMaxFloatOrder + 1, 1.0, t); }) == ErrorKind::UnsupportedOrder);
    CHECK(thrown_kind([] { (void)deriv_eq1(5, 1.0, stirling_table(4)); }) == ErrorKind::OrderOutOfRange);
    CHECK(thrown_kind([] { (void)deriv_series(1, 0.0); }) == ErrorKind::DivergentSeries);
    CHECK(thrown_kind([] { (void)deriv_series(1, -1.0); }) == ErrorKind::DivergentSeries);
    CHECK(thrown_kind([] { (void)deriv_series(10, 0.01, SeriesPolicy{1e-15, 100}); }) == ErrorKind::NonConvergence);
    CHECK(thrown_kind([&] { (void)geometric_moment(1, 1.0, t); }) == ErrorKind::Domain);
    CHECK(thrown_kind([&] { (void)geometric_moment(1, -1.5, t); }) == ErrorKind::Domain);
    CHECK(thrown_kind([&] { (void)fermi_maclaurin_coeff(1, 1.0, -1.0, t); }) == ErrorKind::SingularParameter);
    CHECK(thrown_kind([] { (void)reg_deriv_smallx(1, 2 * std::numbers::pi); }) == ErrorKind::OutOfRadius);
    CHECK(thrown_kind([] { (void)reg_deriv_smallx(1, -7.0); }) == ErrorKind::OutOfRadius);
    CHECK(thrown_kind([] { (void)finite_difference_oracle(2, 0.01, 0.02); }) == ErrorKind::Pole);
    CHECK(thrown_kind([] { (void)finite_difference_oracle(7, 1.0, 0.01); }) == ErrorKind::UnsupportedOrder);
    CHECK_FALSE(thrown_kind([&] { (void)deriv_eq1(0, -3.0, t); }).has_value());
}
