#include "mvlag/numerics.hpp"

#include "mvlag/errors.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mvlag {

ExactScalar make_rational(long num, long den) {
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    ExactScalar r(num, den);
    r.canonicalize();
    return r;
}

ExactScalar make_rational(const ExactInteger& num, const ExactInteger& den) {
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    ExactScalar r(num, den);
    r.canonicalize();
    return r;
}

namespace {

ExactInteger parse_digits(std::string_view digits) {
    if (digits.empty())
        return 0;
    return ExactInteger(std::string(digits), 10);
}

bool all_digits(std::string_view s) {
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

ExactScalar parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view exp_part = s.substr(epos + 1);
        s = s.substr(0, epos);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (exp_part.empty() || exp_part.size() > 6 || !all_digits(exp_part))
            throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
        exponent = std::stol(std::string(exp_part));
        if (exp_negative)
            exponent = -exponent;
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if ((int_part.empty() && frac_part.empty()) || !all_digits(int_part) || !all_digits(frac_part))
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");

    ExactInteger num = parse_digits(std::string(int_part) + std::string(frac_part));
    exponent -= static_cast<long>(frac_part.size());
    ExactInteger scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    ExactScalar r = exponent >= 0 ? ExactScalar(num * scale) : make_rational(num, scale);
    return negative ? ExactScalar(-r) : r;
}

}  // namespace

ExactScalar parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty())
        throw std::invalid_argument("empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        ExactScalar num = parse_decimal(text.substr(0, slash));
        ExactScalar den = parse_decimal(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return parse_decimal(text);
}

std::string format_rational(const ExactScalar& value) {
    return value.get_str(10);
}

std::string format_double(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return buf.data();
}

bool is_integer(const ExactScalar& value) {
    return value.get_den() == 1;
}

double to_double(const ExactScalar& value) {
    // mpq_get_d truncates; numerator and denominator sizes are unbounded.
    return value.get_d();
}

ExactScalar abs(const ExactScalar& value) {
    return value < 0 ? ExactScalar(-value) : value;
}

double log_abs(const ExactScalar& value) {
    if (value == 0)
        throw DomainError("log_abs of zero");
    long exp_num = 0;
    long exp_den = 0;
    double mant_num = std::fabs(mpz_get_d_2exp(&exp_num, value.get_num_mpz_t()));
    double mant_den = mpz_get_d_2exp(&exp_den, value.get_den_mpz_t());
    return std::log(mant_num / mant_den) + static_cast<double>(exp_num - exp_den) * std::numbers::ln2;
}

ExactScalar pochhammer(const ExactScalar& a, unsigned n) {
    ExactScalar result = 1;
    ExactScalar factor = a;
    for (unsigned i = 0; i < n; ++i) {
        result *= factor;
        if (result == 0)
            return result;
        factor += 1;
    }
    return result;
}

ExactInteger factorial(unsigned n) {
    ExactInteger r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

ExactScalar power(const ExactScalar& base, unsigned exponent) {
    ExactScalar r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------- LogValue

LogValue LogValue::from_double(double value) {
    if (value == 0.0)
        return {};
    return {value > 0 ? 1 : -1, std::log(std::fabs(value))};
}

double LogValue::to_double() const {
    return sign_ == 0 ? 0.0 : sign_ * std::exp(log_magnitude_);
}

LogValue LogValue::operator*(const LogValue& rhs) const {
    return {sign_ * rhs.sign_, log_magnitude_ + rhs.log_magnitude_};
}

LogValue LogValue::operator/(const LogValue& rhs) const {
    if (rhs.sign_ == 0)
        throw std::domain_error("LogValue division by zero");
    return {sign_ * rhs.sign_, log_magnitude_ - rhs.log_magnitude_};
}

LogValue LogValue::pow(double exponent) const {
    if (sign_ < 0)
        throw std::domain_error("LogValue::pow of a negative value");
    if (sign_ == 0) {
        if (exponent <= 0)
            throw std::domain_error("LogValue::pow of zero");
        return {};
    }
    return {1, log_magnitude_ * exponent};
}

std::partial_ordering LogValue::operator<=>(const LogValue& rhs) const {
    if (sign_ != rhs.sign_)
        return sign_ <=> rhs.sign_;
    if (sign_ == 0)
        return std::partial_ordering::equivalent;
    return sign_ > 0 ? log_magnitude_ <=> rhs.log_magnitude_ : rhs.log_magnitude_ <=> log_magnitude_;
}

// ---------------------------------------------------------------- gamma

namespace {

// B_{2j} / (2j (2j-1)) for j = 1..10
constexpr std::array<double, 10> kStirlingCoefficients = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

constexpr double kStirlingThreshold = 8.0;

double stirling_log_gamma(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Horner over 1/x^2, smallest terms first.
    double series = 0.0;
    for (auto it = kStirlingCoefficients.rbegin(); it != kStirlingCoefficients.rend(); ++it)
        series = series * inv2 + *it;
    series *= inv;
    constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0))
        throw DomainError("log_gamma requires x > 0");
    if (std::isinf(x))
        return x;
    if (x >= kStirlingThreshold)
        return stirling_log_gamma(x);
    double product = 1.0;
    double shifted = x;
    while (shifted < kStirlingThreshold) {
        product *= shifted;
        shifted += 1.0;
    }
    return stirling_log_gamma(shifted) - std::log(product);
}

LogValue log_pochhammer(double a, unsigned n) {
    if (!(a > 0.0))
        throw DomainError("log_pochhammer requires a > 0");
    if (n == 0)
        return {1, 0.0};
    if (n <= 24) {
        // Direct product is exact to a few ulps and cannot overflow here
        // unless a itself is astronomically large.
        double product = 1.0;
        for (unsigned i = 0; i < n; ++i)
            product *= a + i;
        if (std::isfinite(product))
            return {1, std::log(product)};
    }
    return {1, log_gamma(a + n) - log_gamma(a)};
}

QValue q_value(unsigned n) {
    ExactInteger central;
    mpz_bin_uiui(central.get_mpz_t(), 2ul * n, n);
    ExactInteger denominator;
    mpz_ui_pow_ui(denominator.get_mpz_t(), 2, 2ul * n + 1);
    ExactScalar square = make_rational(central, denominator);
    // mpq_get_d handles operands of any size; q_n^2 >= 1/(2 sqrt(pi n)) stays in range.
    double value = std::sqrt(to_double(square));
    return {std::move(square), value};
}

double log_q(double n) {
    return 0.5 * (log_gamma(2.0 * n + 1.0) - 2.0 * log_gamma(n + 1.0) - (2.0 * n + 1.0) * std::numbers::ln2);
}

}  // namespace mvlag
