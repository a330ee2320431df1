#pragma once

// The two multivariate upper bounds on |L_n^{(alpha)}(x)|, the diagonal
// envelopes A_n(alpha,k), B_n(alpha,k) and the asymptotics of their ratio.

#include "mvlag/bound_expr.hpp"
#include "mvlag/multivariate.hpp"
#include "mvlag/numerics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvlag::bounds {

enum class BoundSource { theorem1, theorem2, szego, rooney1, rooney2, lewandowski_szynal };

std::string_view to_string(BoundSource s);
// Throws std::invalid_argument for unknown names.
BoundSource parse_bound_source(std::string_view name);
bool is_univariate(BoundSource s);

enum class Theorem2Domain {
    standard,  // alpha > -1/2
    extended,  // alpha > -1, reported but not asserted below -1/2
};

struct BoundReport {
    BoundSource source = BoundSource::theorem1;
    BoundExpr expr;
    double bound_value = 0.0;
    LogValue log_bound;
    mv::MultiIndex n;
    ExactScalar alpha;
    mv::EvalPoint x;
    std::optional<ExactScalar> value;   // L evaluated exactly when feasible
    std::optional<double> tightness;    // |L| / bound
    bool extended_domain = false;       // alpha outside the proven range

    std::size_t k() const { return n.size(); }
    // Bound without the e^{|x|/2} factor.
    double coefficient() const { return expr.without_exponential().value(); }
};

// Largest |n| for which the reports evaluate L exactly.
inline constexpr unsigned kExactTotalCap = 64;

// 2^{k-1} (alpha+1)_{|n|} / ((1/k)_{n_1}..(1/k)_{n_k}) e^{|x|/2}; alpha > 0, x >= 0.
BoundReport theorem1_bound(const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x);

// q_{n_1}..q_{n_k} 2^{k-1/2} (alpha+1)_{|n|} / ((1/(2k))_{n_1}..(1/(2k))_{n_k}) e^{|x|/2}.
BoundReport theorem2_bound(const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x,
                           Theorem2Domain domain = Theorem2Domain::standard);

BoundExpr theorem1_expr(const mv::MultiIndex& n, const ExactScalar& alpha, const ExactScalar& norm);
BoundExpr theorem2_expr(const mv::MultiIndex& n, const ExactScalar& alpha, const ExactScalar& norm);

struct Envelopes {
    LogValue a;
    LogValue b;
};

// A_n = 2^{k-1} (alpha+1)_{kn} / ((1/k)_n)^k,
// B_n = q_n^k 2^{k-1/2} (alpha+1)_{kn} / ((1/(2k))_n)^k, in the log domain.
Envelopes ab_coefficients(unsigned n, double alpha, unsigned k);

struct ExactEnvelopes {
    ExactScalar a;
    ExactScalar b_squared;
};

inline constexpr unsigned kExactEnvelopeCap = 50;

// Throws CapExceededError for n > kExactEnvelopeCap.
ExactEnvelopes ab_coefficients_exact(unsigned n, const ExactScalar& alpha, unsigned k);

// ln(A_n / B_n); independent of alpha.
double log_ab_ratio(double n, unsigned k);

enum class AsymptoteForm { paper, derived };

// 2^{(k-1)/2} pi^{k/4} G^k n^{k/4-1/2} with G = Gamma(1/(2k))/Gamma(1/k) for
// AsymptoteForm::paper and its reciprocal for AsymptoteForm::derived.
double ratio_asymptote(double n, unsigned k, AsymptoteForm form);
double asymptote_constant(unsigned k, AsymptoteForm form);

struct RatioFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of the fit residuals
};

// Least squares of ln(A_n/B_n) against ln n over the largest half of n_list.
// Throws std::invalid_argument for fewer than 4 points or a list that is not
// strictly increasing.
RatioFit fit_ratio_exponent(unsigned k, const std::vector<double>& n_list);

}  // namespace mvlag::bounds
