#pragma once

// Zeta values by series and the certificates tying them to exact Bernoulli numbers.

#include "expderiv/quadrature.hpp"

#include <array>
#include <string>
#include <string_view>

namespace expderiv {

enum class IdentityId { Limit7, BernoulliZeta, Euler2m };

std::string_view to_string(IdentityId id);

/// One checked identity. rel_defect is |lhs - rhs| / max(|lhs|, |rhs|, 1e-300)
/// unless `absolute` is set, in which case it is |lhs - rhs| (used when the
/// exact side vanishes, and for the numeric limit).
struct IdentityCertificate {
    IdentityId identity = IdentityId::BernoulliZeta;
    int parameter = 0;
    std::string lhs;        // exact "p/q" where available, else shortest decimal
    double lhs_value = 0.0; // lhs rounded to binary64
    double rhs = 0.0;
    double rel_defect = 0.0;
    bool absolute = false;
    double tolerance = 0.0;
    bool sign_agrees = true;
    bool passed = false;
};

/// Defect threshold for the vanishing cases B_{n+1} = 0, n + 1 odd.
inline constexpr double kZeroCaseTolerance = 1e-15;

/// sum_{k<=K} k^{-s} + K^{1-s}/(s-1), with K large enough that s K^{-s}/2
/// is below rel_tol times the partial sum.
double zeta_series(int s, double rel_tol = 1e-13);

/// 2 n! sin(n pi/2) zeta(n+1) / (2 pi)^{n+1}, n >= 1; the sine is read off n mod 4.
double limit7_rhs(int n);

/// 2 sin(n pi/2) zeta(n+1) / (2 pi)^{n+1}, which should equal B_{n+1}/(n+1)!.
double bernoulli_zeta_rhs(int n);

IdentityCertificate check_bernoulli_zeta(int n, double tol = 1e-12);

/// B_{2m} against (-1)^{m+1} 2 (2m)! zeta(2m) / (2 pi)^{2m}; also requires the
/// sign of the formula to match the exact sign of B_{2m}.
IdentityCertificate check_euler(int m, double tol = 1e-12);

struct LimitEstimate {
    double value = 0.0;          // Richardson value from the two smallest x
    double previous = 0.0;       // Richardson value from the two largest x
    double series_value = 0.0;   // reg_deriv_smallx(n, 0)
    std::array<double, 3> samples{}; // 2 I(n, x) at x = 1e-1, 1e-2, 1e-3
};

/// lim_{x->0} (d/dx)^n (1/(e^x-1) - 1/x) from quadrature at three decades of x
/// with first-order Richardson extrapolation. Throws UnstableLimit when the
/// samples are not monotone, the two extrapolants disagree, or the result
/// strays from the Bernoulli series value.
LimitEstimate limit7_lhs_numeric(int n, const QuadPolicy& policy = {});

/// Numeric limit against limit7_rhs, absolute defect.
IdentityCertificate check_limit7(int n, double tol = 1e-6, const QuadPolicy& policy = {});

} // namespace expderiv
