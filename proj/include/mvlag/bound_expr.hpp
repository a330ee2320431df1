#pragma once

#include "mvlag/bracket.hpp"
#include "mvlag/numerics.hpp"

namespace mvlag {

/// A positive bound of the closed form
///   coefficient * sqrt(radicand) * 2^pow2_exponent * e^exp_argument
/// with every parameter rational. All classical and multivariate bounds fit
/// this shape, which lets a near-tight comparison be redone exactly.
struct BoundExpr {
    ExactScalar coefficient = 1;
    ExactScalar radicand = 1;
    ExactScalar pow2_exponent = 0;
    ExactScalar exp_argument = 0;

    // Everything except the exponential factor.
    BoundExpr without_exponential() const;

    double value() const;
    LogValue log_value() const;

    // |value| / bound, in floats when both are representable, else via logs.
    double tightness_of(const ExactScalar& value) const;

    // Rational enclosure of the bound. When 2 * pow2_exponent is an integer
    // the power of two is folded into the radicand, so bounds such as
    // q_0 * 2^{1/2} = 1 enclose exactly.
    RationalBracket enclose(unsigned bits = kDefaultBracketBits) const;

    bool operator==(const BoundExpr&) const = default;
};

}  // namespace mvlag
