#pragma once

#include "expderiv/verify.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expderiv::cli {

enum class Command { Eval, Table, Verify, Stirling, Bernoulli, Omega };
enum class Format { Json, Csv, Plain };

/// Exit statuses: all checks pass / kernel or verification failure / bad invocation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::Eval;
    std::vector<int> orders;
    std::vector<double> points;
    std::vector<Method> methods;
    std::string suite = "all";
    int max_n = -1;
    int max_m = 15;
    double rel_tol = 1e-15;
    double abs_tol = 1e-13;
    long max_terms = 10'000'000;
    Format format = Format::Json;
    std::string output; // empty = stdout
};

/// "5", "1..15" or "1,2,7"; strictly increasing, non-negative.
std::vector<int> parse_orders(std::string_view spec);
/// Comma list of decimals or the tokens ln2 / pi (optionally negated); strictly increasing, finite.
std::vector<double> parse_points(std::string_view spec);
std::vector<Method> parse_methods(std::string_view spec);

/// Entry point behind the `expderiv` binary; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace expderiv::cli
