#include "mvlag/univariate.hpp"

#include "mvlag/errors.hpp"

#include <cmath>
#include <string>

namespace mvlag::uv {

namespace {

void check_pole(unsigned n, const ExactScalar& alpha) {
    ExactScalar c = alpha + 1;
    if (n > 0 && is_integer(c) && c <= 0 && -c <= n - 1)
        throw PoleError("laguerre_uv: alpha+1 = " + format_rational(c) +
                        " makes (alpha+1)_j vanish for some j <= n");
}

void require_nonnegative_x(const ExactScalar& x, const char* who) {
    if (x < 0)
        throw DomainError(std::string(who) + " requires x >= 0");
}

struct Neumaier {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

ExactScalar laguerre_uv(const UnivariateQuery& q) {
    check_pole(q.n, q.alpha);
    const ExactScalar c = q.alpha + 1;
    ExactScalar sum = 0;
    ExactScalar term = 1;  // (-n)_j / (c)_j * x^j / j!
    for (unsigned j = 0; j <= q.n; ++j) {
        sum += term;
        if (j == q.n)
            break;
        term *= ExactScalar(static_cast<long>(j) - static_cast<long>(q.n));
        term *= q.x;
        term /= (c + j) * (j + 1);
    }
    return pochhammer(c, q.n) / factorial(q.n) * sum;
}

double laguerre_uv(unsigned n, double alpha, double x) {
    const double c = alpha + 1.0;
    Neumaier acc;
    double term = 1.0;
    double prefactor = 1.0;
    for (unsigned j = 0; j <= n; ++j) {
        acc.add(term);
        if (j == n)
            break;
        double denom = (c + j) * (j + 1.0);
        if (c + j == 0.0)
            throw PoleError("laguerre_uv: (alpha+1)_j vanishes");
        term *= (static_cast<double>(j) - n) * x / denom;
        prefactor *= (c + j) / (j + 1.0);
    }
    return prefactor * acc.value();
}

ExactScalar laguerre_uv_recurrence(const UnivariateQuery& q) {
    ExactScalar prev = 1;
    if (q.n == 0)
        return prev;
    ExactScalar curr = q.alpha + 1 - q.x;
    for (unsigned m = 1; m < q.n; ++m) {
        ExactScalar next = ((2 * m + 1 + q.alpha - q.x) * curr - (m + q.alpha) * prev) / (m + 1);
        prev = std::move(curr);
        curr = std::move(next);
    }
    return curr;
}

double laguerre_uv_recurrence(unsigned n, double alpha, double x) {
    double prev = 1.0;
    if (n == 0)
        return prev;
    double curr = alpha + 1.0 - x;
    for (unsigned m = 1; m < n; ++m) {
        double next = ((2.0 * m + 1.0 + alpha - x) * curr - (m + alpha) * prev) / (m + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

double kummer_1f1(double a, double c, double y, double tol) {
    if (!(c > 0.0))
        throw DomainError("kummer_1f1 requires c > 0");
    if (a < 0.0 || y < 0.0)
        throw DomainError("kummer_1f1 requires a >= 0 and y >= 0");
    double sum = 1.0;
    double term = 1.0;
    for (unsigned j = 0; j < 10'000'000u; ++j) {
        double next = term * (a + j) / (c + j) * y / (j + 1.0);
        if (next < tol * sum)
            break;
        sum += next;
        term = next;
    }
    return sum;
}

BoundExpr szego_bound(const UnivariateQuery& q) {
    if (q.alpha < 0)
        throw DomainError("szego_bound requires alpha >= 0");
    require_nonnegative_x(q.x, "szego_bound");
    BoundExpr b;
    b.coefficient = pochhammer(q.alpha + 1, q.n) / factorial(q.n);
    b.exp_argument = q.x / 2;
    return b;
}

BoundExpr rooney_bound_1(const UnivariateQuery& q) {
    if (q.alpha > 0)
        throw DomainError("rooney_bound_1 requires alpha <= 0");
    require_nonnegative_x(q.x, "rooney_bound_1");
    BoundExpr b;
    b.pow2_exponent = -q.alpha;
    b.exp_argument = q.x / 2;
    return b;
}

BoundExpr rooney_bound_2(const UnivariateQuery& q) {
    if (q.alpha > make_rational(-1, 2))
        throw DomainError("rooney_bound_2 requires alpha <= -1/2");
    require_nonnegative_x(q.x, "rooney_bound_2");
    BoundExpr b;
    b.radicand = q_value(q.n).exact_square;
    b.pow2_exponent = -q.alpha;
    b.exp_argument = q.x / 2;
    return b;
}

std::vector<ExactScalar> lewandowski_szynal_polynomial(unsigned n, const ExactScalar& alpha) {
    std::vector<ExactScalar> coeffs(n + 1);
    for (unsigned m = 0; m <= n; ++m)
        coeffs[m] = pochhammer(alpha + 1, n - m) / (factorial(n - m) * factorial(m));
    return coeffs;
}

BoundExpr lewandowski_szynal_bound(const UnivariateQuery& q) {
    if (q.alpha < make_rational(-1, 2))
        throw DomainError("lewandowski_szynal_bound requires alpha >= -1/2");
    require_nonnegative_x(q.x, "lewandowski_szynal_bound");
    auto coeffs = lewandowski_szynal_polynomial(q.n, q.alpha);
    ExactScalar value = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        value = value * q.x + *it;
    BoundExpr b;
    b.coefficient = value;
    return b;
}

}  // namespace mvlag::uv
