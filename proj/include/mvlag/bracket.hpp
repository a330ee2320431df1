#pragma once

// Rational enclosures [lo, hi] of the irrational factors that appear in every
// bound: e^y, 2^r and square roots. Endpoints are rounded outward to dyadic
// rationals with `bits` significant bits so their size stays bounded.

#include "mvlag/numerics.hpp"

namespace mvlag {

struct RationalBracket {
    ExactScalar lo;
    ExactScalar hi;

    bool exact() const { return lo == hi; }
    bool contains(const ExactScalar& v) const { return lo <= v && v <= hi; }
};

inline constexpr unsigned kDefaultBracketBits = 256;

RationalBracket exact_bracket(const ExactScalar& v);

// e^y for any rational y: truncated Taylor series plus a geometric remainder
// bound, inverted for negative arguments.
RationalBracket exp_bracket(const ExactScalar& y, unsigned bits = kDefaultBracketBits);

// ln 2 from sum_{j>=1} 1/(j 2^j) with tail bound 1/((m+1) 2^m).
RationalBracket ln2_bracket(unsigned bits = kDefaultBracketBits);

// 2^r; exact when r is an integer.
RationalBracket pow2_bracket(const ExactScalar& r, unsigned bits = kDefaultBracketBits);

// sqrt(s) for s >= 0; exact when s is the square of a rational.
RationalBracket sqrt_bracket(const ExactScalar& s, unsigned bits = kDefaultBracketBits);

// Product of two brackets with non-negative endpoints.
RationalBracket multiply(const RationalBracket& a, const RationalBracket& b);

ExactScalar round_down(const ExactScalar& v, unsigned bits);
ExactScalar round_up(const ExactScalar& v, unsigned bits);

}  // namespace mvlag
