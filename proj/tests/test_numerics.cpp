#include <doctest.h>

#include "mvlag/bound_expr.hpp"
#include "mvlag/bracket.hpp"
#include "mvlag/errors.hpp"
#include "mvlag/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace mvlag;

namespace {

ExactScalar q(long p, long d = 1) { return make_rational(p, d); }

}  // namespace

// ---------------------------------------------------------------- oracles

TEST_CASE("oracle: pochhammer") {
    CHECK(pochhammer(q(1, 2), 3) == q(15, 8));
    CHECK(pochhammer(q(7, 3), 0) == 1);
    CHECK(pochhammer(q(-5, 2), 0) == 1);
    CHECK(pochhammer(q(-2), 3) == 0);
    CHECK(factorial(5) == 120);
}

TEST_CASE("oracle: log_pochhammer") {
    CHECK(log_pochhammer(1.0, 5).log_magnitude() == doctest::Approx(std::log(120.0)).epsilon(1e-14));
    CHECK(log_pochhammer(0.5, 3).log_magnitude() == doctest::Approx(std::log(15.0 / 8.0)).epsilon(1e-14));
    const double exact = log_abs(pochhammer(q(1, 4), 1000));
    CHECK(std::fabs(log_pochhammer(0.25, 1000).log_magnitude() - exact) <= 1e-12 * std::fabs(exact));
    CHECK_THROWS_AS(log_pochhammer(0.0, 3), DomainError);
    CHECK_THROWS_AS(log_pochhammer(-1.5, 3), DomainError);
}

TEST_CASE("oracle: log_gamma") {
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
    CHECK(std::fabs(log_gamma(1.0)) <= 1e-14);
    CHECK(std::fabs(log_gamma(2.0)) <= 1e-14);
    CHECK(std::exp(log_gamma(0.25)) == doctest::Approx(3.6256099082219083).epsilon(1e-13));
    // Gamma(1/4) Gamma(3/4) = pi / sin(pi/4), both factors from the same routine
    CHECK(log_gamma(0.25) + log_gamma(0.75) ==
          doctest::Approx(std::log(std::numbers::pi * std::numbers::sqrt2)).epsilon(1e-14));
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-2.5), DomainError);
}

TEST_CASE("oracle: q_value") {
    CHECK(q_value(0).exact_square == q(1, 2));
    CHECK(q_value(1).exact_square == q(1, 4));
    CHECK(q_value(1).value == 0.5);
    const double q5 = q_value(5).value;
    CHECK(q5 == doctest::Approx(0.35078).epsilon(1e-5));
    CHECK(q5 * std::pow(4 * std::numbers::pi * 5, 0.25) == doctest::Approx(0.9877).epsilon(1e-4));
}

// ---------------------------------------------------------------- properties

TEST_CASE("log_pochhammer matches the exact product for n <= 200") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(1, 400), den(1, 37);
    for (int trial = 0; trial < 60; ++trial) {
        const ExactScalar a = make_rational(num(rng), den(rng));
        for (unsigned n : {0u, 1u, 7u, 50u, 200u}) {
            const ExactScalar exact = pochhammer(a, n);
            const double lv = log_pochhammer(to_double(a), n).log_magnitude();
            // relative error of exp(lv) against the exact value
            CHECK(std::fabs(std::expm1(lv - log_abs(exact))) <= 1e-10);
        }
    }
}

TEST_CASE("q_value recurrence is exact and q_n is in (0, 1/sqrt 2]") {
    for (unsigned n = 0; n < 300; ++n) {
        const QValue a = q_value(n);
        CHECK(q_value(n + 1).exact_square == a.exact_square * make_rational(2 * n + 1, 2 * n + 2));
        CHECK(a.value > 0.0);
        CHECK(a.value <= std::numbers::sqrt2 / 2 + 1e-16);
        CHECK(a.value * a.value == doctest::Approx(to_double(a.exact_square)).epsilon(1e-15));
    }
}

TEST_CASE("q_n (4 pi n)^{1/4} increases toward 1") {
    double previous = 0.0;
    for (double n = 1; n <= 1e6; n = std::floor(n * 1.5) + 1) {
        const double scaled = std::exp(log_q(n) + 0.25 * std::log(4 * std::numbers::pi * n));
        CHECK(scaled > previous);
        CHECK(scaled < 1.0);
        previous = scaled;
    }
    const double at_million = q_value(1'000'000).value * std::pow(4 * std::numbers::pi * 1e6, 0.25);
    CHECK(at_million >= 0.99996);
    CHECK(at_million <= 1.0);
}

TEST_CASE("log_gamma recursion on [0.1, 1e4]") {
    // An absolute 1e-12 is below one ulp of ln Gamma near 1e4, so the
    // tolerance is relative to max(1, |ln Gamma(x+1)|).
    for (double x = 0.1; x <= 1e4; x *= 1.013) {
        const double residual = log_gamma(x + 1) - log_gamma(x) - std::log(x);
        CHECK(std::fabs(residual) <= 1e-12 * std::max(1.0, std::fabs(log_gamma(x + 1))));
    }
}

TEST_CASE("log_gamma agrees with the C library to 12 digits on [1e-3, 1e7]") {
    for (double x = 1e-3; x <= 1e7; x *= 1.01) {
        const double ref = std::lgamma(x);
        CHECK(std::fabs(log_gamma(x) - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
    }
}

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("-0.75") == q(-3, 4));
    CHECK(parse_rational("1.5e-3") == q(3, 2000));
    CHECK(parse_rational("6/4") == q(3, 2));
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational("0.1") == q(1, 10));
    CHECK(parse_rational("2E2") == 200);
    for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", "--1", "1e", "0x10"})
        CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
    CHECK(format_rational(q(6, 4)) == "3/2");
    CHECK(format_rational(q(-8, 4)) == "-2");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(0.125) == "0.125");
    CHECK(is_integer(q(4, 2)));
    CHECK_FALSE(is_integer(q(1, 2)));
}

TEST_CASE("exact rationals are canonical") {
    const ExactScalar a = make_rational(10, -4);
    CHECK(a.get_num() == -5);
    CHECK(a.get_den() == 2);
    CHECK(q(1, 3) + q(1, 6) == q(1, 2));
    CHECK(ExactScalar(q(1, 3) + q(1, 6)).get_den() == 2);
}

TEST_CASE("log_abs handles values beyond double range") {
    const ExactScalar huge = pochhammer(q(1), 400);  // 400!
    CHECK(log_abs(huge) == doctest::Approx(std::lgamma(401.0)).epsilon(1e-14));
    CHECK(log_abs(1 / huge) == doctest::Approx(-std::lgamma(401.0)).epsilon(1e-14));
}

TEST_CASE("LogValue arithmetic") {
    const LogValue a = LogValue::from_double(-8.0);
    const LogValue b = LogValue::from_double(2.0);
    CHECK((a * b).to_double() == doctest::Approx(-16.0));
    CHECK((a / b).to_double() == doctest::Approx(-4.0));
    CHECK(b.pow(3.0).to_double() == doctest::Approx(8.0));
    CHECK((a * LogValue::zero()).sign() == 0);
    CHECK(b < LogValue::from_double(3.0));
    CHECK(a < b);
    CHECK(LogValue::from_double(-3.0) < LogValue::from_double(-2.0));
    CHECK(LogValue(1, 1e6).to_double() == INFINITY);
}

TEST_CASE("rational brackets enclose the irrational factors") {
    const RationalBracket e = exp_bracket(1);
    CHECK(e.lo < e.hi);
    CHECK(to_double(e.lo) <= std::numbers::e);
    CHECK(to_double(e.hi) >= std::numbers::e);
    CHECK(to_double(e.hi - e.lo) < 1e-60);
    const RationalBracket e_neg = exp_bracket(q(-37, 2));
    CHECK(to_double(e_neg.lo) == doctest::Approx(std::exp(-18.5)).epsilon(1e-15));
    CHECK(to_double(e_neg.lo) <= to_double(e_neg.hi));
    CHECK(exp_bracket(0).exact());
    const RationalBracket l2 = ln2_bracket();
    CHECK(to_double(l2.lo) <= std::numbers::ln2);
    CHECK(to_double(l2.hi) >= std::numbers::ln2);
    CHECK(pow2_bracket(3).exact());
    CHECK(pow2_bracket(3).lo == 8);
    CHECK(pow2_bracket(-2).lo == q(1, 4));
    CHECK(sqrt_bracket(q(9, 4)).exact());
    CHECK(sqrt_bracket(q(9, 4)).lo == q(3, 2));
    const RationalBracket r2 = sqrt_bracket(2);
    CHECK(r2.lo * r2.lo <= 2);
    CHECK(r2.hi * r2.hi >= 2);
    const RationalBracket p = pow2_bracket(q(1, 3));
    CHECK(p.lo * p.lo * p.lo <= 2);
    CHECK(p.hi * p.hi * p.hi >= 2);
}

TEST_CASE("BoundExpr value, log value and enclosure agree") {
    BoundExpr b;
    b.coefficient = q(3, 2);
    b.radicand = q(1, 4);
    b.pow2_exponent = q(3, 2);
    b.exp_argument = q(5, 2);
    const double expected = 1.5 * 0.5 * std::pow(2.0, 1.5) * std::exp(2.5);
    CHECK(b.value() == doctest::Approx(expected).epsilon(1e-15));
    CHECK(b.log_value().log_magnitude() == doctest::Approx(std::log(expected)).epsilon(1e-15));
    const RationalBracket enc = b.enclose();
    CHECK(to_double(enc.lo) <= expected * (1 + 1e-15));
    CHECK(to_double(enc.hi) >= expected * (1 - 1e-15));
    CHECK(b.without_exponential().exp_argument == 0);

    // q_0 * 2^{1/2} = 1 exactly
    BoundExpr unit;
    unit.radicand = q_value(0).exact_square;
    unit.pow2_exponent = q(1, 2);
    CHECK(unit.enclose().exact());
    CHECK(unit.enclose().lo == 1);
    CHECK(unit.tightness_of(q(1, 2)) == doctest::Approx(0.5).epsilon(1e-15));
}
