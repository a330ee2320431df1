#include "mvlag/bound_expr.hpp"

#include <cmath>
#include <numbers>

namespace mvlag {

BoundExpr BoundExpr::without_exponential() const {
    BoundExpr r = *this;
    r.exp_argument = 0;
    return r;
}

LogValue BoundExpr::log_value() const {
    if (coefficient == 0)
        return LogValue::zero();
    double log_mag = log_abs(coefficient) + 0.5 * log_abs(radicand) +
                     to_double(pow2_exponent) * std::numbers::ln2 + to_double(exp_argument);
    return {coefficient > 0 ? 1 : -1, log_mag};
}

double BoundExpr::value() const {
    double direct = to_double(coefficient) * std::sqrt(to_double(radicand)) *
                    std::exp2(to_double(pow2_exponent)) * std::exp(to_double(exp_argument));
    if (std::isfinite(direct) && direct != 0.0)
        return direct;
    return log_value().to_double();
}

double BoundExpr::tightness_of(const ExactScalar& v) const {
    if (v == 0)
        return 0.0;
    const double num = std::fabs(to_double(v));
    const double den = value();
    if (std::isnormal(num) && std::isnormal(den))
        return num / den;
    return std::exp(log_abs(v) - log_value().log_magnitude());
}

RationalBracket BoundExpr::enclose(unsigned bits) const {
    const unsigned work = bits + 16;
    ExactScalar rad = radicand;
    ExactScalar r = pow2_exponent;
    ExactScalar twice = 2 * r;
    if (!is_integer(r) && is_integer(twice)) {
        // 2^r = sqrt(2^{2r})
        rad *= pow2_bracket(twice, work).lo;
        r = 0;
    }
    RationalBracket acc = exact_bracket(abs(coefficient));
    acc = multiply(acc, sqrt_bracket(rad, work));
    acc = multiply(acc, pow2_bracket(r, work));
    acc = multiply(acc, exp_bracket(exp_argument, work));
    if (acc.exact())
        return acc;
    return {round_down(acc.lo, bits), round_up(acc.hi, bits)};
}

}  // namespace mvlag
