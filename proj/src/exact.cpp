#include "expderiv/exact.hpp"

#include "expderiv/error.hpp"

#include <cmath>
#include <stdexcept>

namespace expderiv {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Pole: return "pole";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::OrderOutOfRange: return "order-out-of-range";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DivergentSeries: return "divergent-series";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::OutOfRadius: return "out-of-radius";
    case ErrorKind::SingularParameter: return "singular-parameter";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::UnstableLimit: return "unstable-limit";
    case ErrorKind::Overflow: return "overflow";
    }
    return "unknown";
}

namespace {

bool is_decimal_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
        s.remove_prefix(1);
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

mpz_class parse_mpz(std::string_view s) {
    if (!is_decimal_integer(s))
        throw std::invalid_argument("not a decimal integer: '" + std::string(s) + "'");
    if (s.front() == '+')
        s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

// Top 64 bits as a long double, rescaled; truncates the rest.
long double mpz_to_long_double(const mpz_class& v) {
    if (sgn(v) == 0)
        return 0.0L;
    mpz_class mag = abs(v);
    const auto bits = static_cast<long>(mpz_sizeinbase(mag.get_mpz_t(), 2));
    long shift = 0;
    if (bits > 64) {
        shift = bits - 64;
        mpz_tdiv_q_2exp(mag.get_mpz_t(), mag.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    }
    // mag now fits in 64 bits; split in two halves so this works where long is 32-bit.
    mpz_class hi = mag >> 32;
    mpz_class lo = mag - (hi << 32);
    long double r = static_cast<long double>(hi.get_ui()) * 4294967296.0L + static_cast<long double>(lo.get_ui());
    r = std::ldexp(r, static_cast<int>(shift));
    return sgn(v) < 0 ? -r : r;
}

} // namespace

ExactInt ExactInt::from_string(std::string_view s) { return ExactInt(parse_mpz(s)); }

double ExactInt::to_double() const {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, v_.get_mpz_t());
    return std::ldexp(mant, static_cast<int>(exp));
}

long double ExactInt::to_long_double() const { return mpz_to_long_double(v_); }

ExactRational::ExactRational(const ExactInt& num, const ExactInt& den) {
    if (den.is_zero())
        throw std::invalid_argument("zero denominator");
    v_ = mpq_class(num.raw(), den.raw());
    v_.canonicalize();
}

ExactRational ExactRational::from_string(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos)
        return ExactRational(ExactInt(parse_mpz(s)));
    const std::string_view den = s.substr(slash + 1);
    if (!den.empty() && (den.front() == '-' || den.front() == '+'))
        throw std::invalid_argument("denominator must be unsigned: '" + std::string(s) + "'");
    return ExactRational(ExactInt(parse_mpz(s.substr(0, slash))), ExactInt(parse_mpz(den)));
}

double ExactRational::to_double() const { return v_.get_d(); }

long double ExactRational::to_long_double() const {
    return mpz_to_long_double(v_.get_num()) / mpz_to_long_double(v_.get_den());
}

ExactRational& ExactRational::operator/=(const ExactRational& o) {
    if (o.is_zero())
        throw std::domain_error("division by zero rational");
    v_ /= o.v_;
    return *this;
}

} // namespace expderiv
