#pragma once

/**
 * @file multivariate.hpp
 * @brief Erdelyi's multivariate Laguerre polynomials and the series behind them.
 *
 * L_{n_1..n_k}^{(alpha)}(x) is the coefficient of z_1^{n_1}..z_k^{n_k} in
 *
 *   (1 - z_1 - ... - z_k)^{-alpha-1} exp(-(x_1 z_1 + ... + x_k z_k)/(1 - z_1 - ... - z_k)).
 *
 * Three exact routes are provided and must agree identically:
 *  - laguerre_mv: the confluent Lauricella form
 *      (alpha+1)_{|n|}/(n_1!..n_k!) * Phi2^{(k)}[-n_1..-n_k; alpha+1; x],
 *  - gf_expansion_coeff: the closed coefficient extraction
 *      sum_{p <= n} prod_j (-x_j)^{p_j}/(p_j! (n_j-p_j)!) * (alpha+1+|p|)_{|n|-|p|},
 *  - gf_truncated_series: brute-force composition of truncated multivariate
 *    power series.
 */

#include "mvlag/numerics.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace mvlag::mv {

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<unsigned> entries);
    MultiIndex(std::initializer_list<unsigned> entries) : MultiIndex(std::vector<unsigned>(entries)) {}

    // (n, ..., n) with k entries.
    static MultiIndex constant(std::size_t k, unsigned n);

    std::size_t size() const { return entries_.size(); }
    unsigned operator[](std::size_t i) const { return entries_[i]; }
    unsigned total() const { return total_; }
    const std::vector<unsigned>& entries() const { return entries_; }

    // Lexicographic on the entries.
    auto operator<=>(const MultiIndex& rhs) const { return entries_ <=> rhs.entries_; }
    bool operator==(const MultiIndex& rhs) const { return entries_ == rhs.entries_; }

private:
    std::vector<unsigned> entries_;
    unsigned total_ = 0;
};

// Every multi-index with k entries and total degree <= max_total, lexicographic.
std::vector<MultiIndex> indices_up_to_total(std::size_t k, unsigned max_total);

// Every multi-index with entries in [0, cap], lexicographic.
std::vector<MultiIndex> indices_in_box(std::size_t k, unsigned cap);

class EvalPoint {
public:
    EvalPoint() = default;
    explicit EvalPoint(std::vector<ExactScalar> coords);
    EvalPoint(std::initializer_list<ExactScalar> coords) : EvalPoint(std::vector<ExactScalar>(coords)) {}

    std::size_t size() const { return coords_.size(); }
    const ExactScalar& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<ExactScalar>& coords() const { return coords_; }
    // max_j |x_j|
    const ExactScalar& max_norm() const { return max_norm_; }
    bool nonnegative() const;
    std::vector<double> to_double() const;
    EvalPoint scaled(const ExactScalar& factor) const;

    bool operator==(const EvalPoint& rhs) const { return coords_ == rhs.coords_; }

private:
    std::vector<ExactScalar> coords_;
    ExactScalar max_norm_ = 0;
};

/// Truncated power series in k variables, stored sparsely by exponent vector.
class TruncatedMvSeries {
public:
    TruncatedMvSeries(std::size_t k, unsigned degree_cap);

    std::size_t variables() const { return k_; }
    unsigned degree_cap() const { return cap_; }

    // Coefficient at n; zero for absent indices or |n| > degree_cap.
    ExactScalar coefficient(const MultiIndex& n) const;
    void set(const MultiIndex& n, ExactScalar value);
    const std::map<MultiIndex, ExactScalar>& terms() const { return terms_; }

    static TruncatedMvSeries constant(std::size_t k, unsigned cap, const ExactScalar& c);
    // sum_j c_j z_j
    static TruncatedMvSeries linear(unsigned cap, std::span<const ExactScalar> c);

    TruncatedMvSeries operator+(const TruncatedMvSeries& rhs) const;
    TruncatedMvSeries operator*(const TruncatedMvSeries& rhs) const;
    TruncatedMvSeries operator*(const ExactScalar& scalar) const;

    // sum_{m=0}^{cap} w_m f^m for f without constant term.
    TruncatedMvSeries compose(std::span<const ExactScalar> weights) const;

private:
    std::size_t k_;
    unsigned cap_;
    std::map<MultiIndex, ExactScalar> terms_;
};

inline constexpr unsigned kSeriesDegreeCap = 12;
inline constexpr unsigned kDiagonalDegreeCap = 240;

// Phi2^{(k)}[b; c; x] = sum_j (b_1)_{j_1}..(b_k)_{j_k}/(c)_{|j|} x^j / j!.
// When every b_j is a non-positive integer the series is finite and trunc is
// ignored; otherwise the sum is cut at total degree trunc.
// Throws PoleError if a vanishing (c)_s is reachable and
// MissingTruncationError for an infinite series without trunc.
ExactScalar phi2k(std::span<const ExactScalar> b, const ExactScalar& c, const EvalPoint& x,
                  std::optional<unsigned> trunc = std::nullopt);

struct Phi2Options {
    double tol = 1e-14;
    unsigned max_degree = 100000;
};

// Floating Phi2. Infinite series stop after three consecutive degree layers
// each contribute less than tol times the partial sum.
double phi2k(std::span<const double> b, double c, std::span<const double> x, const Phi2Options& opts = {});

ExactScalar laguerre_mv(const MultiIndex& n, const ExactScalar& alpha, const EvalPoint& x);
double laguerre_mv(const MultiIndex& n, double alpha, std::span<const double> x);

ExactScalar gf_expansion_coeff(const MultiIndex& n, const ExactScalar& alpha, const EvalPoint& x);

// Taylor expansion of the generating function through total degree N.
// Throws CapExceededError when N > cap.
TruncatedMvSeries gf_truncated_series(const ExactScalar& alpha, const EvalPoint& x, unsigned N,
                                      unsigned cap = kSeriesDegreeCap);

// L_{n,...,n}^{(alpha)}(x) for n = 0..N. Throws CapExceededError when N*k > cap.
std::vector<ExactScalar> diagonal_sequence(const ExactScalar& alpha, const EvalPoint& x, unsigned N,
                                           unsigned cap = kDiagonalDegreeCap);

using CoefficientRule = std::function<ExactScalar(unsigned)>;

struct PandaCheck {
    bool equal = false;
    std::vector<ExactScalar> lhs;  // multiple-series coefficient of x^d
    std::vector<ExactScalar> rhs;  // single-series coefficient of x^d
    ExactScalar lhs_value;         // lhs polynomial evaluated at x
    ExactScalar rhs_value;
};

// Compares, degree by degree through D, both sides of
//   sum_j C(|j|) (a_1)_{j_1}..(a_k)_{j_k} x^{|j|}/(j_1!..j_k!) = sum_j C(j) (a_1+..+a_k)_j x^j/j!
PandaCheck panda_reduce_check(std::span<const ExactScalar> alphas, const CoefficientRule& rule,
                              const ExactScalar& x, unsigned D);

enum class ChainVariant { theorem1, theorem2 };

struct ChainValues {
    double phi2 = 0.0;  // Phi2[p,..,p; alpha+1; x/2], p = 1/k or 1/(2k)
    double f11 = 0.0;   // 1F1[a; alpha+1; |x|/2], a = 1 or 1/2
    double exp = 0.0;   // e^{|x|/2}
    bool ascending = false;  // both relations hold at relative tolerance 1e-12
};

// Requires alpha > 0 (theorem1) or alpha > -1/2 (theorem2) and x >= 0.
ChainValues chain_check(std::size_t k, double alpha, std::span<const double> x, ChainVariant variant);

/// Floating evaluator of L_n^{(alpha)} at many points for fixed (n, alpha),
/// with a rigorous a-priori bound on the rounding error. Uses the pole-free
/// coefficient-extraction form, so any alpha is accepted.
class FloatMvEvaluator {
public:
    FloatMvEvaluator(const MultiIndex& n, const ExactScalar& alpha);

    struct Result {
        double value;
        double error_bound;
    };
    Result operator()(std::span<const double> x) const;

private:
    std::vector<unsigned> n_;
    unsigned total_;
    std::vector<double> tail_;  // (alpha+1+s)_{|n|-s}
    std::vector<std::vector<double>> inv_fact_pairs_;  // 1/(p! (n_j-p)!)
    double relative_error_;
};

}  // namespace mvlag::mv
