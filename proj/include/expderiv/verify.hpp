#pragma once

// Verification suites behind `expderiv verify`. Each suite pairs a kernel with
// an independent route (enumeration, exact summation, differencing, closed form).

#include "expderiv/zeta_bernoulli.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace expderiv {

/// counts[k] = number of partitions of {1..n} into exactly k nonempty blocks,
/// by walking every restricted growth string. Meant for n <= 12.
std::vector<std::uint64_t> count_set_partitions(int n);

/// Coefficient-wise comparison, in exact arithmetic, of
///   sum_{k=1}^{n+1} S(n+1,k) (k-1)! u^k   and   (1 + u) sum_{k=1}^{n} S(n,k) k! u^k.
/// Returns the number of coefficients that differ.
int closed_form_coefficient_mismatches(int n, const StirlingTriangle& triangle);

/// sum_{m>=0} m^n x^m summed term by term in exact rationals (x taken as its
/// exact binary64 value) until the geometric tail bound is negligible.
double direct_moment_sum(int n, double x);

/// Taylor coefficient of t^n in 1/(mu e^{lambda t} + 1) at t = 0 from central
/// differences in extended precision, two Richardson steps, h = 0.1/|lambda|.
double fermi_taylor_fd(int n, double lambda, double mu);

struct ComparisonRecord {
    std::string check;
    int n = 0;
    std::optional<double> x;
    std::string lhs_method;
    std::string rhs_method;
    double defect = 0.0;
    bool absolute = false;
    double tolerance = 0.0;
    bool passed = false;
};

struct VerifyReport {
    std::string suite;
    std::vector<IdentityCertificate> certificates;
    std::vector<ComparisonRecord> comparisons;

    std::size_t total() const { return certificates.size() + comparisons.size(); }
    std::size_t passed() const;
    std::size_t failed() const { return total() - passed(); }
    bool all_passed() const { return failed() == 0; }
};

struct VerifyOptions {
    int max_n = -1;               // stirling (30), equivalence (50), bernoulli-zeta (25)
    int max_m = 15;               // euler
    std::vector<int> orders;      // cross (1..15), quadrature (1..8), limit (1..6); empty = default
    std::vector<double> points;   // cross / quadrature / fourier grids; empty = default
    SeriesPolicy series{};
    QuadPolicy quad{};
};

/// Known suite names, in the order `all` runs them.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite. Kernel errors inside a
/// suite are recorded as failed checks, not thrown.
VerifyReport run_suite(const std::string& suite, const VerifyOptions& options);

} // namespace expderiv
