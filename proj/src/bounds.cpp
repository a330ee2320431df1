#include "mvlag/bounds.hpp"

#include "mvlag/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mvlag::bounds {

namespace {

constexpr std::array<std::pair<BoundSource, std::string_view>, 6> kSourceNames = {{
    {BoundSource::theorem1, "theorem1"},
    {BoundSource::theorem2, "theorem2"},
    {BoundSource::szego, "szego"},
    {BoundSource::rooney1, "rooney1"},
    {BoundSource::rooney2, "rooney2"},
    {BoundSource::lewandowski_szynal, "lewandowski_szynal"},
}};

void check_inputs(const mv::MultiIndex& n, const mv::EvalPoint& x, const char* who) {
    if (n.size() != x.size())
        throw DomainError(std::string(who) + ": n and x must both have k entries");
    if (!x.nonnegative())
        throw DomainError(std::string(who) + " requires x_j >= 0");
}

void attach_value(BoundReport& r) {
    r.bound_value = r.expr.value();
    r.log_bound = r.expr.log_value();
    if (r.n.total() > kExactTotalCap)
        return;
    ExactScalar v;
    try {
        v = mv::laguerre_mv(r.n, r.alpha, r.x);
    } catch (const PoleError&) {
        v = mv::gf_expansion_coeff(r.n, r.alpha, r.x);
    }
    r.tightness = r.expr.tightness_of(v);
    r.value = std::move(v);
}

}  // namespace

std::string_view to_string(BoundSource s) {
    for (const auto& [src, name] : kSourceNames)
        if (src == s)
            return name;
    return "unknown";
}

BoundSource parse_bound_source(std::string_view name) {
    for (const auto& [src, n] : kSourceNames)
        if (n == name)
            return src;
    throw std::invalid_argument("unknown bound source '" + std::string(name) + "'");
}

bool is_univariate(BoundSource s) {
    return s != BoundSource::theorem1 && s != BoundSource::theorem2;
}

BoundExpr theorem1_expr(const mv::MultiIndex& n, const ExactScalar& alpha, const ExactScalar& norm) {
    const auto k = static_cast<long>(n.size());
    const ExactScalar p = make_rational(1, k);
    ExactScalar denom = 1;
    for (unsigned nj : n.entries())
        denom *= pochhammer(p, nj);
    BoundExpr b;
    b.coefficient = pochhammer(alpha + 1, n.total()) / denom;
    b.coefficient *= ExactScalar(ExactInteger(1) << static_cast<mp_bitcnt_t>(k - 1));
    b.exp_argument = norm / 2;
    return b;
}

BoundExpr theorem2_expr(const mv::MultiIndex& n, const ExactScalar& alpha, const ExactScalar& norm) {
    const auto k = static_cast<long>(n.size());
    const ExactScalar p = make_rational(1, 2 * k);
    ExactScalar denom = 1;
    ExactScalar q_squares = 1;
    for (unsigned nj : n.entries()) {
        denom *= pochhammer(p, nj);
        q_squares *= q_value(nj).exact_square;
    }
    BoundExpr b;
    b.coefficient = pochhammer(alpha + 1, n.total()) / denom;
    b.radicand = q_squares;
    b.pow2_exponent = make_rational(2 * k - 1, 2);
    b.exp_argument = norm / 2;
    return b;
}

BoundReport theorem1_bound(const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x) {
    if (alpha <= 0)
        throw DomainError("theorem1_bound requires alpha > 0");
    check_inputs(n, x, "theorem1_bound");
    BoundReport r;
    r.source = BoundSource::theorem1;
    r.expr = theorem1_expr(n, alpha, x.max_norm());
    r.n = n;
    r.alpha = alpha;
    r.x = x;
    attach_value(r);
    return r;
}

BoundReport theorem2_bound(const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x,
                           Theorem2Domain domain) {
    const ExactScalar minus_half = make_rational(-1, 2);
    if (domain == Theorem2Domain::standard && alpha <= minus_half)
        throw DomainError("theorem2_bound requires alpha > -1/2 (extended mode allows alpha > -1)");
    if (alpha <= -1)
        throw DomainError("theorem2_bound requires alpha > -1");
    check_inputs(n, x, "theorem2_bound");
    BoundReport r;
    r.source = BoundSource::theorem2;
    r.expr = theorem2_expr(n, alpha, x.max_norm());
    r.n = n;
    r.alpha = alpha;
    r.x = x;
    r.extended_domain = alpha <= minus_half;
    attach_value(r);
    return r;
}

Envelopes ab_coefficients(unsigned n, double alpha, unsigned k) {
    if (k == 0)
        throw DomainError("ab_coefficients requires k >= 1");
    const double kd = k;
    const LogValue rising = log_pochhammer(alpha + 1.0, k * n);
    const double log_a = (kd - 1.0) * std::numbers::ln2 + rising.log_magnitude() -
                         kd * log_pochhammer(1.0 / kd, n).log_magnitude();
    const double log_b = kd * log_q(n) + (kd - 0.5) * std::numbers::ln2 + rising.log_magnitude() -
                         kd * log_pochhammer(1.0 / (2.0 * kd), n).log_magnitude();
    return {LogValue{1, log_a}, LogValue{1, log_b}};
}

ExactEnvelopes ab_coefficients_exact(unsigned n, const ExactScalar& alpha, unsigned k) {
    if (k == 0)
        throw DomainError("ab_coefficients requires k >= 1");
    if (n > kExactEnvelopeCap)
        throw CapExceededError("ab_coefficients_exact: n beyond the exact-path cap");
    const ExactScalar rising = pochhammer(alpha + 1, k * n);
    const ExactScalar inv_k = make_rational(1, static_cast<long>(k));
    const ExactScalar inv_2k = make_rational(1, 2 * static_cast<long>(k));
    ExactEnvelopes e;
    e.a = ExactScalar(ExactInteger(1) << (k - 1)) * rising / power(pochhammer(inv_k, n), k);
    // B^2 = q_n^{2k} 2^{2k-1} ((alpha+1)_{kn})^2 / ((1/(2k))_n)^{2k}
    e.b_squared = power(q_value(n).exact_square, k) * ExactScalar(ExactInteger(1) << (2 * k - 1)) *
                  rising * rising / power(pochhammer(inv_2k, n), 2 * k);
    return e;
}

double log_ab_ratio(double n, unsigned k) {
    const double kd = k;
    auto log_rising = [](double a, double m) { return log_gamma(a + m) - log_gamma(a); };
    return -0.5 * std::numbers::ln2 - kd * log_q(n) +
           kd * (log_rising(1.0 / (2.0 * kd), n) - log_rising(1.0 / kd, n));
}

double asymptote_constant(unsigned k, AsymptoteForm form) {
    const double kd = k;
    double log_gamma_ratio = log_gamma(1.0 / (2.0 * kd)) - log_gamma(1.0 / kd);
    if (form == AsymptoteForm::derived)
        log_gamma_ratio = -log_gamma_ratio;
    return std::exp(0.5 * (kd - 1.0) * std::numbers::ln2 + 0.25 * kd * std::log(std::numbers::pi) +
                    kd * log_gamma_ratio);
}

double ratio_asymptote(double n, unsigned k, AsymptoteForm form) {
    if (n < 1.0)
        throw DomainError("ratio_asymptote requires n >= 1");
    return asymptote_constant(k, form) * std::pow(n, k / 4.0 - 0.5);
}

RatioFit fit_ratio_exponent(unsigned k, const std::vector<double>& n_list) {
    if (n_list.size() < 4)
        throw std::invalid_argument("fit_ratio_exponent needs at least 4 points");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (!(n_list[i] > n_list[i - 1]))
            throw std::invalid_argument("fit_ratio_exponent: n_list must be strictly increasing");
    if (n_list.front() < 1.0)
        throw std::invalid_argument("fit_ratio_exponent: n must be >= 1");

    const std::size_t first = n_list.size() / 2;
    const double count = static_cast<double>(n_list.size() - first);
    double sx = 0, sy = 0;
    std::vector<double> xs, ys;
    for (std::size_t i = first; i < n_list.size(); ++i) {
        xs.push_back(std::log(n_list[i]));
        ys.push_back(log_ab_ratio(n_list[i], k));
        sx += xs.back();
        sy += ys.back();
    }
    const double mx = sx / count;
    const double my = sy / count;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    RatioFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / count);
    return fit;
}

}  // namespace mvlag::bounds
