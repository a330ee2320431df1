#pragma once

// Dirichlet measure on the standard simplex E_k = {u : u_j >= 0, sum u_j <= 1}
// with density proportional to u_1^{b_1-1}..u_k^{b_k-1} (1-u_1-..-u_k)^{beta-1}:
// exact moments, seeded sampling, and Monte-Carlo checks of the simplex
// integral representation of L_n^{(alpha)}.

#include "mvlag/multivariate.hpp"
#include "mvlag/numerics.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mvlag::dirichlet {

struct DirichletParams {
    std::vector<double> b;
    double beta = 1.0;

    // Throws DomainError unless every b_j > 0 and beta > 0.
    void validate() const;
};

// prod_j (b_j)_{j_j} / (b_1+..+b_k+beta)_{|j|}
ExactScalar dirichlet_moment(std::span<const ExactScalar> b, const ExactScalar& beta, const mv::MultiIndex& j);

/// Draws points of E_k from Dir(b_1..b_k, beta) by normalizing k+1 Gamma
/// variates. The generator for stream s is seeded with seed ^ s, so
/// substreams are reproducible and independent of scheduling.
class DirichletSampler {
public:
    DirichletSampler(DirichletParams params, std::uint64_t seed, std::uint64_t stream = 0);

    // Writes the k coordinates of the next point into u.
    void next(std::vector<double>& u);

    const DirichletParams& params() const { return params_; }

private:
    DirichletParams params_;
    std::mt19937_64 engine_;
    std::vector<std::gamma_distribution<double>> gammas_;
    std::vector<double> draws_;
};

// `count` points from stream 0.
std::vector<std::vector<double>> dirichlet_sample(const DirichletParams& p, std::uint64_t seed, std::size_t count);

/// Running mean and variance; merge() combines partial results pairwise.
class MeanAccumulator {
public:
    void add(double v);
    void merge(const MeanAccumulator& other);

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const;  // unbiased sample variance
    double standard_error() const;

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct McComparison {
    double lhs = 0.0;
    double mc_estimate = 0.0;
    double std_error = 0.0;

    // |lhs - estimate| <= sigmas * std_error, with a rounding allowance for
    // integrands that are constant.
    bool within(double sigmas = 3.0) const;
};

inline constexpr std::size_t kMinIntegralSamples = 10'000;

// L_n^{(sum a_j + beta + k)}(x) against
//   (sum a_j + beta + k + 1)_{|n|} / prod (a_j+1)_{n_j} * E[prod_j L_{n_j}^{(a_j)}(x_j u_j)],
// u ~ Dir(a_1+1, .., a_k+1, beta+1). Requires a_j > -1, beta > -1, samples >= 10^4.
McComparison integral_repr_check(const mv::MultiIndex& n, std::span<const ExactScalar> alphas,
                                 const ExactScalar& beta, const mv::EvalPoint& x, std::size_t samples,
                                 std::uint64_t seed);

// The representation specialized as in the two main bounds:
//   theorem1: a_j = (1-k)/k,   beta = alpha - 1   (alpha > 0)
//   theorem2: a_j = (1-2k)/2k, beta = alpha - 1/2 (alpha > -1/2)
McComparison specialization_check(const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x,
                                  mv::ChainVariant variant, std::size_t samples, std::uint64_t seed);

}  // namespace mvlag::dirichlet
