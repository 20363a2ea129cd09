#include "expderiv/combinatorics.hpp"

#include "expderiv/error.hpp"

#include <stdexcept>
#include <string>

namespace expderiv {

ExactInt factorial(int n) {
    if (n < 0)
        throw Error(ErrorKind::Domain, "factorial of negative n=" + std::to_string(n));
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return ExactInt(std::move(r));
}

ExactInt binomial(int n, int k) {
    if (n < 0)
        throw Error(ErrorKind::Domain, "binomial with negative n=" + std::to_string(n));
    if (k < 0 || k > n)
        return ExactInt(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return ExactInt(std::move(r));
}

StirlingTriangle::StirlingTriangle(int max_order) {
    if (max_order < 0)
        throw Error(ErrorKind::Domain, "stirling table needs max_order >= 0");
    rows_.reserve(static_cast<std::size_t>(max_order) + 1);
    rows_.push_back({ExactInt(1)});
    for (int m = 0; m < max_order; ++m) {
        const auto& prev = rows_.back();
        std::vector<ExactInt> next(static_cast<std::size_t>(m) + 2);
        // next[0] stays 0: S(m+1, 0) = 0.
        for (int k = 1; k <= m + 1; ++k) {
            ExactInt v = prev[static_cast<std::size_t>(k) - 1];
            if (k <= m)
                v += ExactInt(k) * prev[static_cast<std::size_t>(k)];
            next[static_cast<std::size_t>(k)] = std::move(v);
        }
        rows_.push_back(std::move(next));
    }
}

const ExactInt& StirlingTriangle::at(int m, int k) const {
    static const ExactInt zero(0);
    if (m < 0 || m > max_order())
        throw Error(ErrorKind::OrderOutOfRange,
                    "S(" + std::to_string(m) + ",k) outside table of order " + std::to_string(max_order()));
    if (k < 0 || k > m)
        return zero;
    return rows_[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
}

std::span<const ExactInt> StirlingTriangle::row(int m) const {
    at(m, 0);
    return rows_[static_cast<std::size_t>(m)];
}

StirlingTriangle stirling_table(int max_order) { return StirlingTriangle(max_order); }

GeometricPolynomial geometric_polynomial(int n, const StirlingTriangle& triangle) {
    if (n < 0 || n > triangle.max_order())
        throw Error(ErrorKind::OrderOutOfRange, "geometric polynomial order " + std::to_string(n) +
                                                    " exceeds triangle order " +
                                                    std::to_string(triangle.max_order()));
    GeometricPolynomial p;
    p.order = n;
    p.coeffs.reserve(static_cast<std::size_t>(n) + 1);
    ExactInt kfact(1);
    for (int k = 0; k <= n; ++k) {
        if (k > 0)
            kfact *= ExactInt(k);
        p.coeffs.push_back(triangle.at(n, k) * kfact);
    }
    return p;
}

long double eval_geometric_polynomial(const GeometricPolynomial& p, long double x) {
    long double acc = 0.0L;
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it)
        acc = acc * x + it->to_long_double();
    return acc;
}

double eval_geometric_polynomial(const GeometricPolynomial& p, double x) {
    return static_cast<double>(eval_geometric_polynomial(p, static_cast<long double>(x)));
}

std::vector<ExactRational> bernoulli_table(int max_n) {
    if (max_n < 0)
        throw Error(ErrorKind::Domain, "bernoulli index must be >= 0");
    std::vector<ExactRational> b;
    b.reserve(static_cast<std::size_t>(max_n) + 1);
    b.emplace_back(1);
    for (int n = 1; n <= max_n; ++n) {
        // (n+1) B_n = -sum_{j<n} C(n+1, j) B_j
        ExactRational acc;
        for (int j = 0; j < n; ++j) {
            if (b[static_cast<std::size_t>(j)].is_zero())
                continue;
            acc += ExactRational(binomial(n + 1, j)) * b[static_cast<std::size_t>(j)];
        }
        b.push_back(-acc / ExactRational(n + 1));
    }
    return b;
}

ExactRational bernoulli(int n) { return bernoulli_table(n).back(); }

} // namespace expderiv
