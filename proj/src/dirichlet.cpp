#include "mvlag/dirichlet.hpp"

#include "mvlag/errors.hpp"
#include "mvlag/univariate.hpp"

#include <cmath>
#include <numeric>

namespace mvlag::dirichlet {

void DirichletParams::validate() const {
    if (b.empty())
        throw DomainError("Dirichlet measure requires k >= 1");
    for (double bj : b)
        if (!(bj > 0.0))
            throw DomainError("Dirichlet measure requires b_j > 0");
    if (!(beta > 0.0))
        throw DomainError("Dirichlet measure requires beta > 0");
}

ExactScalar dirichlet_moment(std::span<const ExactScalar> b, const ExactScalar& beta, const mv::MultiIndex& j) {
    if (b.size() != j.size())
        throw DomainError("dirichlet_moment: b and j must have the same length");
    ExactScalar total = beta;
    ExactScalar num = 1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] <= 0)
            throw DomainError("dirichlet_moment requires b_j > 0");
        total += b[i];
        num *= pochhammer(b[i], j[i]);
    }
    if (beta <= 0)
        throw DomainError("dirichlet_moment requires beta > 0");
    return num / pochhammer(total, j.total());
}

DirichletSampler::DirichletSampler(DirichletParams params, std::uint64_t seed, std::uint64_t stream)
    : params_(std::move(params)), engine_(seed ^ stream) {
    params_.validate();
    for (double bj : params_.b)
        gammas_.emplace_back(bj, 1.0);
    gammas_.emplace_back(params_.beta, 1.0);
    draws_.resize(gammas_.size());
}

void DirichletSampler::next(std::vector<double>& u) {
    double sum = 0.0;
    do {
        sum = 0.0;
        for (std::size_t i = 0; i < gammas_.size(); ++i) {
            draws_[i] = gammas_[i](engine_);
            sum += draws_[i];
        }
    } while (!(sum > 0.0));
    u.resize(params_.b.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = draws_[i] / sum;
}

std::vector<std::vector<double>> dirichlet_sample(const DirichletParams& p, std::uint64_t seed, std::size_t count) {
    DirichletSampler sampler(p, seed);
    std::vector<std::vector<double>> out(count);
    for (auto& u : out)
        sampler.next(u);
    return out;
}

// ---------------------------------------------------------------- estimator

void MeanAccumulator::add(double v) {
    ++count_;
    double delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
    if (other.count_ == 0)
        return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double n1 = static_cast<double>(count_);
    const double n2 = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double n = n1 + n2;
    mean_ += delta * n2 / n;
    m2_ += other.m2_ + delta * delta * n1 * n2 / n;
    count_ += other.count_;
}

double MeanAccumulator::variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double MeanAccumulator::standard_error() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

bool McComparison::within(double sigmas) const {
    const double allowance = 1e-12 * std::max(1.0, std::fabs(lhs));
    return std::fabs(lhs - mc_estimate) <= sigmas * std_error + allowance;
}

// ---------------------------------------------------------------- representation

McComparison integral_repr_check(const mv::MultiIndex& n, std::span<const ExactScalar> alphas,
                                 const ExactScalar& beta, const mv::EvalPoint& x, std::size_t samples,
                                 std::uint64_t seed) {
    const std::size_t k = n.size();
    if (alphas.size() != k || x.size() != k)
        throw DomainError("integral_repr_check: n, alphas and x must all have k entries");
    for (const auto& a : alphas)
        if (a <= -1)
            throw DomainError("integral_repr_check requires alpha_j > -1");
    if (beta <= -1)
        throw DomainError("integral_repr_check requires beta > -1");
    if (samples < kMinIntegralSamples)
        throw DomainError("integral_repr_check requires at least 10^4 samples");

    ExactScalar alpha_sum = 0;
    ExactScalar prefactor_den = 1;
    DirichletParams params;
    for (std::size_t j = 0; j < k; ++j) {
        alpha_sum += alphas[j];
        prefactor_den *= pochhammer(alphas[j] + 1, n[j]);
        params.b.push_back(to_double(alphas[j] + 1));
    }
    params.beta = to_double(beta + 1);
    const ExactScalar top = alpha_sum + beta + static_cast<long>(k);

    McComparison out;
    out.lhs = to_double(mv::laguerre_mv(n, top, x));
    const double prefactor = to_double(pochhammer(top + 1, n.total()) / prefactor_den);

    const std::vector<double> xd = x.to_double();
    std::vector<double> alphas_d;
    for (const auto& a : alphas)
        alphas_d.push_back(to_double(a));

    DirichletSampler sampler(params, seed);
    MeanAccumulator acc;
    std::vector<double> u;
    for (std::size_t s = 0; s < samples; ++s) {
        sampler.next(u);
        double integrand = 1.0;
        for (std::size_t j = 0; j < k; ++j)
            integrand *= uv::laguerre_uv_recurrence(n[j], alphas_d[j], xd[j] * u[j]);
        acc.add(integrand);
    }
    out.mc_estimate = prefactor * acc.mean();
    out.std_error = std::fabs(prefactor) * acc.standard_error();
    return out;
}

McComparison specialization_check(const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x,
                                  mv::ChainVariant variant, std::size_t samples, std::uint64_t seed) {
    const auto k = static_cast<long>(n.size());
    ExactScalar a_j;
    ExactScalar beta;
    if (variant == mv::ChainVariant::theorem1) {
        if (alpha <= 0)
            throw DomainError("specialization_check(theorem1) requires alpha > 0");
        a_j = make_rational(1 - k, k);
        beta = alpha - 1;
    } else {
        if (alpha <= make_rational(-1, 2))
            throw DomainError("specialization_check(theorem2) requires alpha > -1/2");
        a_j = make_rational(1 - 2 * k, 2 * k);
        beta = alpha - make_rational(1, 2);
    }
    std::vector<ExactScalar> alphas(static_cast<std::size_t>(k), a_j);
    return integral_repr_check(n, alphas, beta, x, samples, seed);
}

}  // namespace mvlag::dirichlet
