#pragma once

/**
 * @file numerics.hpp
 * @brief Exact rational and log-domain arithmetic shared by every module.
 *
 * ExactScalar is a GMP rational. Every gmpxx arithmetic result is already in
 * canonical form (lowest terms, positive denominator); values built from a
 * numerator/denominator pair go through make_rational(), which canonicalizes.
 *
 * LogValue carries a sign next to the natural log of the magnitude so that
 * Pochhammer products and the diagonal envelopes stay representable for
 * indices far past the double range.
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mvlag {

using ExactScalar = mpq_class;
using ExactInteger = mpz_class;

ExactScalar make_rational(long num, long den = 1);
ExactScalar make_rational(const ExactInteger& num, const ExactInteger& den);

// Parses "p/q", an integer, or a decimal such as "-0.75" or "1.5e-3". Decimals
// are converted exactly from their base-10 digits. Throws std::invalid_argument.
ExactScalar parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is one.
std::string format_rational(const ExactScalar& value);

// 17 significant digits, the fixed float format of every report.
std::string format_double(double value);

bool is_integer(const ExactScalar& value);

double to_double(const ExactScalar& value);

ExactScalar abs(const ExactScalar& value);

// ln |value| without overflow for rationals of any size; value != 0.
double log_abs(const ExactScalar& value);

// (a)_n = a (a+1) ... (a+n-1); (a)_0 = 1.
ExactScalar pochhammer(const ExactScalar& a, unsigned n);

ExactInteger factorial(unsigned n);

ExactScalar power(const ExactScalar& base, unsigned exponent);

/// Signed value stored as sign * exp(log_magnitude).
class LogValue {
public:
    constexpr LogValue() = default;
    constexpr LogValue(int sign, double log_magnitude)
        : sign_(sign > 0 ? 1 : (sign < 0 ? -1 : 0)), log_magnitude_(sign == 0 ? 0.0 : log_magnitude) {}

    static LogValue from_double(double value);
    static LogValue zero() { return {}; }

    int sign() const { return sign_; }
    double log_magnitude() const { return log_magnitude_; }

    // May overflow to +-inf or underflow to 0.
    double to_double() const;

    LogValue operator*(const LogValue& rhs) const;
    LogValue operator/(const LogValue& rhs) const;
    LogValue pow(double exponent) const;

    std::partial_ordering operator<=>(const LogValue& rhs) const;
    bool operator==(const LogValue& rhs) const = default;

private:
    int sign_ = 0;
    double log_magnitude_ = 0.0;
};

// ln Gamma(x) for x > 0: Stirling series with Bernoulli corrections for
// x >= 8, upward argument shift below that. Throws DomainError for x <= 0.
double log_gamma(double x);

// ln (a)_n = ln Gamma(a+n) - ln Gamma(a), a > 0. Throws DomainError otherwise.
LogValue log_pochhammer(double a, unsigned n);

struct QValue {
    ExactScalar exact_square;  // (2n)! / (2^{2n+1} (n!)^2)
    double value;              // positive square root of exact_square
};

// q_n = ((2n)!)^{1/2} / (2^{n+1/2} n!)
QValue q_value(unsigned n);

// ln q_n through log_gamma, for indices where the exact square is too large.
double log_q(double n);

}  // namespace mvlag
