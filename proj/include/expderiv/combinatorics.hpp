#pragma once

// Exact combinatorial substrate: factorials, binomials, Stirling numbers of
// the second kind, geometric polynomials and Bernoulli numbers.

#include "expderiv/exact.hpp"

#include <span>
#include <vector>

namespace expderiv {

ExactInt factorial(int n);
/// C(n, k); zero when k < 0 or k > n.
ExactInt binomial(int n, int k);

/// Exact table of S(m, k) for 0 <= k <= m <= max_order, built row by row from
/// S(0,0) = 1 with S(m+1,k) = k S(m,k) + S(m,k-1). Immutable once built.
class StirlingTriangle {
public:
    explicit StirlingTriangle(int max_order);

    int max_order() const { return static_cast<int>(rows_.size()) - 1; }

    /// S(m, k); zero for k > m or k < 0. Throws OrderOutOfRange if m > max_order().
    const ExactInt& at(int m, int k) const;
    std::span<const ExactInt> row(int m) const;

private:
    std::vector<std::vector<ExactInt>> rows_;
};

StirlingTriangle stirling_table(int max_order);

/// Coefficients a_k = S(n,k) k! of omega_n(x) = sum_k a_k x^k, with the k = 0
/// slot stored explicitly (a_0 = 1 for n = 0, else 0).
struct GeometricPolynomial {
    int order = 0;
    std::vector<ExactInt> coeffs;
};

GeometricPolynomial geometric_polynomial(int n, const StirlingTriangle& triangle);

/// Horner in binary64 (accumulated in extended precision, so coefficients
/// past the binary64 range do not overflow on their own).
double eval_geometric_polynomial(const GeometricPolynomial& p, double x);
long double eval_geometric_polynomial(const GeometricPolynomial& p, long double x);

/// B_0 .. B_max_n from sum_{j=0}^{n} C(n+1, j) B_j = 0, B_0 = 1. B_1 = -1/2.
std::vector<ExactRational> bernoulli_table(int max_n);
ExactRational bernoulli(int n);

} // namespace expderiv
