#pragma once

// Univariate Laguerre polynomials L_n^(alpha)(x): the explicit 1F1 sum, the
// three-term recurrence used as its oracle, a non-negative-term Kummer series
// and the four classical upper bounds on |L_n^(alpha)(x)|.

#include "mvlag/bound_expr.hpp"
#include "mvlag/numerics.hpp"

#include <vector>

namespace mvlag::uv {

struct UnivariateQuery {
    unsigned n = 0;
    ExactScalar alpha = 0;
    ExactScalar x = 0;
};

// ((alpha+1)_n / n!) * 1F1[-n; alpha+1; x], summed exactly.
// Throws PoleError when alpha+1 is in {0, -1, ..., -(n-1)}.
ExactScalar laguerre_uv(const UnivariateQuery& q);

// Same sum in double precision with Neumaier compensation.
double laguerre_uv(unsigned n, double alpha, double x);

// (m+1) L_{m+1} = (2m+1+alpha-x) L_m - (m+alpha) L_{m-1}; defined for every alpha.
ExactScalar laguerre_uv_recurrence(const UnivariateQuery& q);
double laguerre_uv_recurrence(unsigned n, double alpha, double x);

// Partial sum of sum_j (a)_j/(c)_j y^j/j!, stopped once the next term drops
// below tol times the partial sum. Requires c > 0, a >= 0, y >= 0.
double kummer_1f1(double a, double c, double y, double tol = 1e-16);

// |L_n^(alpha)(x)| <= (alpha+1)_n/n! e^{x/2},         alpha >= 0
BoundExpr szego_bound(const UnivariateQuery& q);
// |L_n^(alpha)(x)| <= 2^{-alpha} e^{x/2},             alpha <= 0
BoundExpr rooney_bound_1(const UnivariateQuery& q);
// |L_n^(alpha)(x)| <= q_n 2^{-alpha} e^{x/2},         alpha <= -1/2
BoundExpr rooney_bound_2(const UnivariateQuery& q);
// |L_n^(alpha)(x)| <= sum_m (alpha+1)_{n-m}/(n-m)! x^m/m!,  alpha >= -1/2
BoundExpr lewandowski_szynal_bound(const UnivariateQuery& q);

// Coefficients c_0..c_n (in powers of x) of the Lewandowski-Szynal majorant.
std::vector<ExactScalar> lewandowski_szynal_polynomial(unsigned n, const ExactScalar& alpha);

}  // namespace mvlag::uv
