#include "mvlag/multivariate.hpp"

#include "mvlag/errors.hpp"
#include "mvlag/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mvlag::mv {

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<unsigned> entries)
    : entries_(std::move(entries)), total_(std::accumulate(entries_.begin(), entries_.end(), 0u)) {
    if (entries_.empty())
        throw DomainError("MultiIndex requires k >= 1");
}

MultiIndex MultiIndex::constant(std::size_t k, unsigned n) {
    return MultiIndex(std::vector<unsigned>(k, n));
}

namespace {

// Advances `e` to the next vector in lexicographic order with entries in
// [0, limit[i]]; returns false after the last one.
bool next_in_box(std::vector<unsigned>& e, std::span<const unsigned> limit) {
    for (std::size_t i = e.size(); i-- > 0;) {
        if (e[i] < limit[i]) {
            ++e[i];
            return true;
        }
        e[i] = 0;
    }
    return false;
}

}  // namespace

std::vector<MultiIndex> indices_up_to_total(std::size_t k, unsigned max_total) {
    std::vector<MultiIndex> out;
    std::vector<unsigned> e(k, 0);
    std::vector<unsigned> limit(k, max_total);
    do {
        if (std::accumulate(e.begin(), e.end(), 0u) <= max_total)
            out.emplace_back(e);
    } while (next_in_box(e, limit));
    return out;
}

std::vector<MultiIndex> indices_in_box(std::size_t k, unsigned cap) {
    std::vector<MultiIndex> out;
    std::vector<unsigned> e(k, 0);
    std::vector<unsigned> limit(k, cap);
    do {
        out.emplace_back(e);
    } while (next_in_box(e, limit));
    return out;
}

// ---------------------------------------------------------------- EvalPoint

EvalPoint::EvalPoint(std::vector<ExactScalar> coords) : coords_(std::move(coords)) {
    if (coords_.empty())
        throw DomainError("EvalPoint requires k >= 1");
    for (const auto& c : coords_)
        if (abs(c) > max_norm_)
            max_norm_ = abs(c);
}

bool EvalPoint::nonnegative() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const ExactScalar& c) { return c >= 0; });
}

std::vector<double> EvalPoint::to_double() const {
    std::vector<double> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_)
        out.push_back(mvlag::to_double(c));
    return out;
}

EvalPoint EvalPoint::scaled(const ExactScalar& factor) const {
    std::vector<ExactScalar> c = coords_;
    for (auto& v : c)
        v *= factor;
    return EvalPoint(std::move(c));
}

// ---------------------------------------------------------------- series

TruncatedMvSeries::TruncatedMvSeries(std::size_t k, unsigned degree_cap) : k_(k), cap_(degree_cap) {
    if (k == 0)
        throw DomainError("TruncatedMvSeries requires k >= 1");
}

ExactScalar TruncatedMvSeries::coefficient(const MultiIndex& n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? ExactScalar(0) : it->second;
}

void TruncatedMvSeries::set(const MultiIndex& n, ExactScalar value) {
    if (n.size() != k_)
        throw DomainError("TruncatedMvSeries::set: index has wrong length");
    if (n.total() > cap_)
        return;
    if (value == 0)
        terms_.erase(n);
    else
        terms_[n] = std::move(value);
}

TruncatedMvSeries TruncatedMvSeries::constant(std::size_t k, unsigned cap, const ExactScalar& c) {
    TruncatedMvSeries s(k, cap);
    s.set(MultiIndex(std::vector<unsigned>(k, 0)), c);
    return s;
}

TruncatedMvSeries TruncatedMvSeries::linear(unsigned cap, std::span<const ExactScalar> c) {
    TruncatedMvSeries s(c.size(), cap);
    for (std::size_t j = 0; j < c.size(); ++j) {
        std::vector<unsigned> e(c.size(), 0);
        e[j] = 1;
        s.set(MultiIndex(std::move(e)), c[j]);
    }
    return s;
}

TruncatedMvSeries TruncatedMvSeries::operator+(const TruncatedMvSeries& rhs) const {
    TruncatedMvSeries out = *this;
    for (const auto& [n, c] : rhs.terms_)
        out.set(n, out.coefficient(n) + c);
    return out;
}

TruncatedMvSeries TruncatedMvSeries::operator*(const ExactScalar& scalar) const {
    TruncatedMvSeries out(k_, cap_);
    if (scalar == 0)
        return out;
    for (const auto& [n, c] : terms_)
        out.terms_.emplace(n, c * scalar);
    return out;
}

TruncatedMvSeries TruncatedMvSeries::operator*(const TruncatedMvSeries& rhs) const {
    if (rhs.k_ != k_)
        throw DomainError("TruncatedMvSeries product: variable counts differ");
    TruncatedMvSeries out(k_, std::min(cap_, rhs.cap_));
    std::vector<unsigned> sum(k_);
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : rhs.terms_) {
            if (a.total() + b.total() > out.cap_)
                continue;
            for (std::size_t i = 0; i < k_; ++i)
                sum[i] = a[i] + b[i];
            out.terms_[MultiIndex(sum)] += ca * cb;
        }
    }
    std::erase_if(out.terms_, [](const auto& kv) { return kv.second == 0; });
    return out;
}

TruncatedMvSeries TruncatedMvSeries::compose(std::span<const ExactScalar> weights) const {
    if (coefficient(MultiIndex(std::vector<unsigned>(k_, 0))) != 0)
        throw DomainError("TruncatedMvSeries::compose needs a series without constant term");
    TruncatedMvSeries out(k_, cap_);
    TruncatedMvSeries pw = constant(k_, cap_, 1);
    for (std::size_t m = 0; m < weights.size() && !pw.terms_.empty(); ++m) {
        out = out + pw * weights[m];
        pw = pw * *this;
    }
    return out;
}

// ---------------------------------------------------------------- Phi2

namespace {

// Negative-integer parameter -> number of non-zero terms minus one.
std::optional<unsigned> finite_length(const ExactScalar& b) {
    if (is_integer(b) && b <= 0) {
        const ExactInteger& n = b.get_num();
        return static_cast<unsigned>(-n.get_si());
    }
    return std::nullopt;
}

std::optional<unsigned> finite_length(double b) {
    if (b <= 0.0 && b == std::floor(b))
        return static_cast<unsigned>(-b);
    return std::nullopt;
}

std::vector<ExactScalar> convolve(const std::vector<ExactScalar>& a, const std::vector<ExactScalar>& b, unsigned cap) {
    std::vector<ExactScalar> out(std::min<std::size_t>(a.size() + b.size() - 1, cap + 1), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

void check_reachable_pole(const ExactScalar& c, unsigned max_degree) {
    if (is_integer(c) && c <= 0 && 1 - c <= max_degree)
        throw PoleError("Phi2: denominator parameter c = " + format_rational(c) +
                        " makes (c)_s vanish at a reachable degree");
}

}  // namespace

ExactScalar phi2k(std::span<const ExactScalar> b, const ExactScalar& c, const EvalPoint& x,
                  std::optional<unsigned> trunc) {
    if (b.size() != x.size())
        throw DomainError("phi2k: b and x must have the same length");
    bool finite = true;
    unsigned finite_degree = 0;
    for (const auto& bj : b) {
        if (auto len = finite_length(bj))
            finite_degree += *len;
        else
            finite = false;
    }
    if (!finite && !trunc)
        throw MissingTruncationError("phi2k: infinite series needs a truncation degree");
    const unsigned max_degree = finite ? finite_degree : *trunc;
    check_reachable_pole(c, max_degree);

    // Layer sums: coefficient of t^s in prod_j sum_i (b_j)_i (x_j t)^i / i!.
    std::vector<ExactScalar> layers{1};
    for (std::size_t j = 0; j < b.size(); ++j) {
        unsigned len = finite_length(b[j]).value_or(max_degree);
        len = std::min(len, max_degree);
        std::vector<ExactScalar> terms(len + 1);
        terms[0] = 1;
        for (unsigned i = 1; i <= len; ++i)
            terms[i] = terms[i - 1] * (b[j] + (i - 1)) * x[j] / i;
        layers = convolve(layers, terms, max_degree);
    }
    ExactScalar sum = 0;
    ExactScalar rising = 1;  // (c)_s
    for (std::size_t s = 0; s < layers.size(); ++s) {
        sum += layers[s] / rising;
        rising *= c + static_cast<long>(s);
    }
    return sum;
}

double phi2k(std::span<const double> b, double c, std::span<const double> x, const Phi2Options& opts) {
    if (b.size() != x.size())
        throw DomainError("phi2k: b and x must have the same length");
    bool finite = true;
    unsigned finite_degree = 0;
    for (double bj : b) {
        if (auto len = finite_length(bj))
            finite_degree += *len;
        else
            finite = false;
    }
    const unsigned max_degree = finite ? finite_degree : opts.max_degree;
    if (c <= 0.0 && c == std::floor(c) && 1.0 - c <= max_degree)
        throw PoleError("Phi2: denominator parameter makes (c)_s vanish at a reachable degree");

    const std::size_t k = b.size();
    // terms[j][i] = (b_j)_i x_j^i / i!; prefix[j][s] = coefficient of t^s in
    // prod_{m<=j} of those series. Both grow one degree per layer.
    std::vector<std::vector<double>> terms(k, std::vector<double>{1.0});
    std::vector<std::vector<double>> prefix(k, std::vector<double>{1.0});
    double sum = 1.0;
    double rising = 1.0;
    unsigned quiet_layers = 0;
    for (unsigned s = 1; s <= max_degree; ++s) {
        rising *= c + (s - 1);
        for (std::size_t j = 0; j < k; ++j) {
            auto len = finite_length(b[j]);
            double t = (len && s > *len) ? 0.0 : terms[j].back() * (b[j] + (s - 1)) * x[j] / s;
            terms[j].push_back(t);
            double layer = 0.0;
            if (j == 0) {
                layer = t;
            } else {
                for (unsigned i = 0; i <= s; ++i)
                    layer += prefix[j - 1][s - i] * terms[j][i];
            }
            prefix[j].push_back(layer);
        }
        double contribution = prefix[k - 1][s] / rising;
        sum += contribution;
        if (!finite) {
            quiet_layers = std::fabs(contribution) < opts.tol * std::fabs(sum) ? quiet_layers + 1 : 0;
            if (quiet_layers >= 3)
                break;
        }
    }
    return sum;
}

// ---------------------------------------------------------------- Laguerre

ExactScalar laguerre_mv(const MultiIndex& n, const ExactScalar& alpha, const EvalPoint& x) {
    if (n.size() != x.size())
        throw DomainError("laguerre_mv: n and x must have the same length");
    std::vector<ExactScalar> b;
    b.reserve(n.size());
    ExactInteger denom = 1;
    for (unsigned nj : n.entries()) {
        b.emplace_back(-static_cast<long>(nj));
        denom *= factorial(nj);
    }
    const ExactScalar c = alpha + 1;
    ExactScalar phi = phi2k(b, c, x);
    return pochhammer(c, n.total()) / denom * phi;
}

double laguerre_mv(const MultiIndex& n, double alpha, std::span<const double> x) {
    if (n.size() != x.size())
        throw DomainError("laguerre_mv: n and x must have the same length");
    std::vector<double> b;
    double prefactor = 1.0;
    for (unsigned nj : n.entries())
        b.push_back(-static_cast<double>(nj));
    const double c = alpha + 1.0;
    double phi = phi2k(b, c, x);
    // (c)_{|n|} / prod n_j!, interleaved to keep the magnitude moderate.
    unsigned s = 0;
    for (unsigned nj : n.entries())
        for (unsigned i = 1; i <= nj; ++i, ++s)
            prefactor *= (c + s) / i;
    return prefactor * phi;
}

ExactScalar gf_expansion_coeff(const MultiIndex& n, const ExactScalar& alpha, const EvalPoint& x) {
    if (n.size() != x.size())
        throw DomainError("gf_expansion_coeff: n and x must have the same length");
    const std::size_t k = n.size();
    // factor[j][p] = (-x_j)^p / (p! (n_j - p)!)
    std::vector<std::vector<ExactScalar>> factor(k);
    for (std::size_t j = 0; j < k; ++j) {
        factor[j].resize(n[j] + 1);
        ExactScalar pw = 1;
        for (unsigned p = 0; p <= n[j]; ++p) {
            factor[j][p] = pw / (factorial(p) * factorial(n[j] - p));
            pw *= -x[j];
        }
    }
    ExactScalar sum = 0;
    std::vector<unsigned> p(k, 0);
    do {
        unsigned ptotal = 0;
        ExactScalar term = 1;
        for (std::size_t j = 0; j < k; ++j) {
            term *= factor[j][p[j]];
            ptotal += p[j];
        }
        if (term != 0)
            sum += term * pochhammer(alpha + 1 + ptotal, n.total() - ptotal);
    } while (next_in_box(p, n.entries()));
    return sum;
}

TruncatedMvSeries gf_truncated_series(const ExactScalar& alpha, const EvalPoint& x, unsigned N, unsigned cap) {
    if (N > cap)
        throw CapExceededError("gf_truncated_series: degree " + std::to_string(N) + " exceeds cap " +
                               std::to_string(cap));
    const std::size_t k = x.size();
    std::vector<ExactScalar> ones(k, 1);
    std::vector<ExactScalar> minus_x;
    for (const auto& c : x.coords())
        minus_x.push_back(-c);

    const TruncatedMvSeries s = TruncatedMvSeries::linear(N, ones);

    std::vector<ExactScalar> geometric(N + 1, 1);
    std::vector<ExactScalar> exponential(N + 1);
    std::vector<ExactScalar> binomial(N + 1);
    for (unsigned m = 0; m <= N; ++m) {
        exponential[m] = make_rational(ExactInteger(1), factorial(m));
        binomial[m] = pochhammer(alpha + 1, m) / factorial(m);
    }

    // exp(-<x,z>/(1-s)) and (1-s)^{-alpha-1}
    const TruncatedMvSeries inner = TruncatedMvSeries::linear(N, minus_x) * s.compose(geometric);
    const TruncatedMvSeries exp_part = inner.compose(exponential);
    const TruncatedMvSeries power_part = s.compose(binomial);
    return power_part * exp_part;
}

std::vector<ExactScalar> diagonal_sequence(const ExactScalar& alpha, const EvalPoint& x, unsigned N, unsigned cap) {
    if (static_cast<unsigned long>(N) * x.size() > cap)
        throw CapExceededError("diagonal_sequence: N*k = " + std::to_string(N * x.size()) + " exceeds cap " +
                               std::to_string(cap));
    std::vector<ExactScalar> out;
    out.reserve(N + 1);
    for (unsigned n = 0; n <= N; ++n)
        out.push_back(laguerre_mv(MultiIndex::constant(x.size(), n), alpha, x));
    return out;
}

// ---------------------------------------------------------------- Panda

PandaCheck panda_reduce_check(std::span<const ExactScalar> alphas, const CoefficientRule& rule,
                              const ExactScalar& x, unsigned D) {
    const std::size_t k = alphas.size();
    if (k == 0)
        throw DomainError("panda_reduce_check requires k >= 1");
    PandaCheck out;
    out.lhs.assign(D + 1, 0);
    out.rhs.assign(D + 1, 0);

    // Left side: every multi-index j with |j| <= D, enumerated explicitly.
    std::vector<std::vector<ExactScalar>> weight(k, std::vector<ExactScalar>(D + 1));
    for (std::size_t i = 0; i < k; ++i)
        for (unsigned j = 0; j <= D; ++j)
            weight[i][j] = pochhammer(alphas[i], j) / factorial(j);
    std::vector<unsigned> j(k, 0);
    std::vector<unsigned> limit(k, D);
    do {
        unsigned total = std::accumulate(j.begin(), j.end(), 0u);
        if (total > D)
            continue;
        ExactScalar term = 1;
        for (std::size_t i = 0; i < k; ++i)
            term *= weight[i][j[i]];
        out.lhs[total] += term;
    } while (next_in_box(j, limit));

    ExactScalar alpha_sum = 0;
    for (const auto& a : alphas)
        alpha_sum += a;
    for (unsigned d = 0; d <= D; ++d) {
        ExactScalar c = rule(d);
        out.lhs[d] *= c;
        out.rhs[d] = c * pochhammer(alpha_sum, d) / factorial(d);
    }

    out.lhs_value = 0;
    out.rhs_value = 0;
    for (unsigned d = D + 1; d-- > 0;) {
        out.lhs_value = out.lhs_value * x + out.lhs[d];
        out.rhs_value = out.rhs_value * x + out.rhs[d];
    }
    out.equal = out.lhs == out.rhs;
    return out;
}

// ---------------------------------------------------------------- chain

ChainValues chain_check(std::size_t k, double alpha, std::span<const double> x, ChainVariant variant) {
    if (k == 0 || x.size() != k)
        throw DomainError("chain_check: x must have k >= 1 coordinates");
    const bool first = variant == ChainVariant::theorem1;
    if (first && !(alpha > 0.0))
        throw DomainError("chain_check(theorem1) requires alpha > 0");
    if (!first && !(alpha > -0.5))
        throw DomainError("chain_check(theorem2) requires alpha > -1/2");
    double norm = 0.0;
    for (double v : x) {
        if (v < 0.0)
            throw DomainError("chain_check requires x_j >= 0");
        norm = std::max(norm, v);
    }
    const double p = first ? 1.0 / k : 1.0 / (2.0 * k);
    std::vector<double> b(k, p);
    std::vector<double> half(x.begin(), x.end());
    for (double& v : half)
        v *= 0.5;

    ChainValues out;
    out.phi2 = phi2k(b, alpha + 1.0, half, Phi2Options{1e-17, 100000});
    out.f11 = uv::kummer_1f1(first ? 1.0 : 0.5, alpha + 1.0, norm / 2.0, 1e-17);
    out.exp = std::exp(norm / 2.0);
    constexpr double guard = 1.0 + 1e-12;
    out.ascending = out.phi2 <= out.f11 * guard && out.f11 <= out.exp * guard;
    return out;
}

// ---------------------------------------------------------------- float evaluator

FloatMvEvaluator::FloatMvEvaluator(const MultiIndex& n, const ExactScalar& alpha)
    : n_(n.entries()), total_(n.total()) {
    // alpha enters only through (alpha+1+s)_{|n|-s}, rounded once from the exact value.
    tail_.resize(total_ + 1);
    for (unsigned s = 0; s <= total_; ++s)
        tail_[s] = to_double(pochhammer(alpha + 1 + s, total_ - s));
    inv_fact_pairs_.resize(n_.size());
    for (std::size_t j = 0; j < n_.size(); ++j) {
        inv_fact_pairs_[j].resize(n_[j] + 1);
        for (unsigned p = 0; p <= n_[j]; ++p)
            inv_fact_pairs_[j][p] = to_double(make_rational(ExactInteger(1), factorial(p) * factorial(n_[j] - p)));
    }
    // Longest chain of roundings feeding any single term, with room to spare:
    // x^p and its factor, the k-fold convolution, tail products and the sums.
    const unsigned chain = 4 * total_ + 6 * static_cast<unsigned>(n_.size()) + 16;
    relative_error_ = 2.0 * chain * std::numeric_limits<double>::epsilon();
}

FloatMvEvaluator::Result FloatMvEvaluator::operator()(std::span<const double> x) const {
    if (x.size() != n_.size())
        throw DomainError("FloatMvEvaluator: wrong number of coordinates");
    thread_local std::vector<double> poly, poly_abs, next, next_abs, f, f_abs;
    poly.assign(1, 1.0);
    poly_abs.assign(1, 1.0);
    for (std::size_t j = 0; j < n_.size(); ++j) {
        const unsigned nj = n_[j];
        f.resize(nj + 1);
        f_abs.resize(nj + 1);
        double pw = 1.0;
        for (unsigned p = 0; p <= nj; ++p) {
            f[p] = pw * inv_fact_pairs_[j][p];
            f_abs[p] = std::fabs(f[p]);
            pw *= -x[j];
        }
        next.assign(poly.size() + nj, 0.0);
        next_abs.assign(poly.size() + nj, 0.0);
        for (std::size_t a = 0; a < poly.size(); ++a) {
            for (unsigned p = 0; p <= nj; ++p) {
                next[a + p] += poly[a] * f[p];
                next_abs[a + p] += poly_abs[a] * f_abs[p];
            }
        }
        poly.swap(next);
        poly_abs.swap(next_abs);
    }
    double value = 0.0;
    double majorant = 0.0;
    for (unsigned s = 0; s <= total_; ++s) {
        value += poly[s] * tail_[s];
        majorant += poly_abs[s] * std::fabs(tail_[s]);
    }
    return {value, relative_error_ * majorant};
}

}  // namespace mvlag::mv
