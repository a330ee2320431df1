#include "mvlag/bracket.hpp"

#include "mvlag/errors.hpp"

#include <stdexcept>

namespace mvlag {

namespace {

long approx_log2(const ExactScalar& v) {
    return static_cast<long>(mpz_sizeinbase(v.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(v.get_den_mpz_t(), 2));
}

ExactInteger pow2(unsigned long e) {
    ExactInteger r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

// floor or ceil of v * 2^shift, divided back by 2^shift, for v > 0.
ExactScalar round_positive(const ExactScalar& v, unsigned bits, bool up) {
    long shift = static_cast<long>(bits) - approx_log2(v);
    ExactInteger num = v.get_num();
    ExactInteger den = v.get_den();
    if (shift >= 0)
        num *= pow2(static_cast<unsigned long>(shift));
    else
        den *= pow2(static_cast<unsigned long>(-shift));
    ExactInteger q;
    if (up)
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    else
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (shift >= 0)
        return make_rational(q, pow2(static_cast<unsigned long>(shift)));
    return ExactScalar(q * pow2(static_cast<unsigned long>(-shift)));
}

// e^y for 0 <= y <= 1.
RationalBracket exp_small(const ExactScalar& y, unsigned bits) {
    ExactScalar sum = 1;
    ExactScalar term = 1;
    ExactScalar tolerance = make_rational(ExactInteger(1), pow2(bits + 4));
    for (unsigned j = 1;; ++j) {
        term *= y;
        term /= j;
        // Tail after the previous term is at most term / (1 - y/(j+1)) <= 2 term.
        if (term <= tolerance * sum) {
            ExactScalar lo = round_down(sum, bits + 8);
            ExactScalar hi = round_up(sum + 2 * term, bits + 8);
            return {lo, hi};
        }
        sum += term;
    }
}

RationalBracket exp_nonnegative(const ExactScalar& y, unsigned bits) {
    if (y == 0)
        return {1, 1};
    unsigned halvings = 0;
    ExactScalar reduced = y;
    while (reduced > 1) {
        reduced /= 2;
        ++halvings;
    }
    const unsigned work_bits = bits + 2 * halvings + 16;
    RationalBracket b = exp_small(reduced, work_bits);
    for (unsigned i = 0; i < halvings; ++i)
        b = {round_down(b.lo * b.lo, work_bits), round_up(b.hi * b.hi, work_bits)};
    return {round_down(b.lo, bits), round_up(b.hi, bits)};
}

}  // namespace

ExactScalar round_down(const ExactScalar& v, unsigned bits) {
    if (v == 0)
        return 0;
    if (v < 0)
        return -round_positive(-v, bits, true);
    return round_positive(v, bits, false);
}

ExactScalar round_up(const ExactScalar& v, unsigned bits) {
    if (v == 0)
        return 0;
    if (v < 0)
        return -round_positive(-v, bits, false);
    return round_positive(v, bits, true);
}

RationalBracket exact_bracket(const ExactScalar& v) {
    return {v, v};
}

RationalBracket exp_bracket(const ExactScalar& y, unsigned bits) {
    if (y >= 0)
        return exp_nonnegative(y, bits);
    RationalBracket inv = exp_nonnegative(-y, bits + 4);
    return {round_down(1 / inv.hi, bits), round_up(1 / inv.lo, bits)};
}

RationalBracket ln2_bracket(unsigned bits) {
    ExactScalar sum = 0;
    const unsigned terms = bits + 4;
    for (unsigned j = 1; j <= terms; ++j)
        sum += make_rational(ExactInteger(1), ExactInteger(j) * pow2(j));
    ExactScalar tail = make_rational(ExactInteger(1), ExactInteger(terms + 1) * pow2(terms));
    return {round_down(sum, bits), round_up(sum + tail, bits)};
}

RationalBracket pow2_bracket(const ExactScalar& r, unsigned bits) {
    if (is_integer(r)) {
        const ExactInteger& e = r.get_num();
        if (!e.fits_slong_p())
            throw std::overflow_error("pow2_bracket exponent out of range");
        long ei = e.get_si();
        if (ei >= 0)
            return exact_bracket(ExactScalar(pow2(static_cast<unsigned long>(ei))));
        return exact_bracket(make_rational(ExactInteger(1), pow2(static_cast<unsigned long>(-ei))));
    }
    RationalBracket ln2 = ln2_bracket(bits + 16);
    ExactScalar a = r * ln2.lo;
    ExactScalar b = r * ln2.hi;
    const ExactScalar& y_lo = a < b ? a : b;
    const ExactScalar& y_hi = a < b ? b : a;
    return {exp_bracket(y_lo, bits).lo, exp_bracket(y_hi, bits).hi};
}

RationalBracket sqrt_bracket(const ExactScalar& s, unsigned bits) {
    if (s < 0)
        throw DomainError("sqrt_bracket requires s >= 0");
    if (s == 0)
        return {0, 0};
    // sqrt(p/q) = sqrt(p q) / q
    ExactInteger pq = s.get_num() * s.get_den();
    long half_log = static_cast<long>(mpz_sizeinbase(pq.get_mpz_t(), 2)) / 2;
    long shift = static_cast<long>(bits) - half_log + 2;
    unsigned long b = shift > 0 ? static_cast<unsigned long>(shift) : 0ul;
    ExactInteger scaled = pq * pow2(2 * b);
    ExactInteger root;
    ExactInteger rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t());
    ExactInteger den = s.get_den() * pow2(b);
    ExactScalar lo = make_rational(root, den);
    if (rem == 0)
        return {lo, lo};
    return {lo, make_rational(root + 1, den)};
}

RationalBracket multiply(const RationalBracket& a, const RationalBracket& b) {
    if (a.lo < 0 || b.lo < 0)
        throw DomainError("multiply expects non-negative brackets");
    return {a.lo * b.lo, a.hi * b.hi};
}

}  // namespace mvlag
