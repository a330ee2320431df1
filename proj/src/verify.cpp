#include "mvlag/verify.hpp"

#include "mvlag/errors.hpp"
#include "mvlag/univariate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace mvlag::verify {

using bounds::BoundSource;

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::near_tight: return "NEAR_TIGHT";
    case Verdict::violation: return "VIOLATION";
    }
    return "UNKNOWN";
}

std::string_view to_string(ComparisonPolicy p) {
    return p == ComparisonPolicy::float_guarded ? "float_guarded" : "exact_fallback";
}

std::string_view to_string(SamplingMode m) {
    return m == SamplingMode::grid ? "grid" : "random";
}

std::string_view to_string(Winner w) {
    switch (w) {
    case Winner::theorem1: return "theorem1";
    case Winner::theorem2: return "theorem2";
    case Winner::tie: return "tie";
    }
    return "unknown";
}

// ---------------------------------------------------------------- config

namespace {

void check_alpha_domain(BoundSource source, const ExactScalar& alpha, bool extended) {
    const ExactScalar minus_half = make_rational(-1, 2);
    auto fail = [&](const char* constraint) {
        throw ConfigError(std::string(bounds::to_string(source)) + " requires " + constraint + ", got alpha = " +
                          format_rational(alpha));
    };
    switch (source) {
    case BoundSource::theorem1:
        if (alpha <= 0) fail("alpha > 0");
        break;
    case BoundSource::theorem2:
        if (extended) {
            if (alpha <= -1) fail("alpha > -1");
        } else if (alpha <= minus_half) {
            fail("alpha > -1/2 (set theorem2_extended for alpha > -1)");
        }
        break;
    case BoundSource::szego:
        if (alpha < 0) fail("alpha >= 0");
        break;
    case BoundSource::rooney1:
        if (alpha > 0) fail("alpha <= 0");
        break;
    case BoundSource::rooney2:
        if (alpha > minus_half) fail("alpha <= -1/2");
        break;
    case BoundSource::lewandowski_szynal:
        if (alpha < minus_half) fail("alpha >= -1/2");
        break;
    }
}

}  // namespace

void SweepConfig::validate() const {
    if (k < 1)
        throw ConfigError("k must be >= 1");
    if (alpha_set.empty())
        throw ConfigError("alpha_set must not be empty");
    if (bounds.empty())
        throw ConfigError("bounds must not be empty");
    if (x_grid.values.empty())
        throw ConfigError("x_grid must contain at least one coordinate value");
    for (const auto& v : x_grid.values)
        if (v < 0)
            throw ConfigError("x_grid values must be >= 0");
    if (x_grid.mode == SamplingMode::random) {
        if (!seed)
            throw ConfigError("random sampling requires a seed");
        if (sample_count < 1)
            throw ConfigError("random sampling requires sample_count >= 1");
    }
    if (static_cast<unsigned long>(index_cap) * k > kSweepDegreeCap)
        throw CapExceededError("index_cap * k = " + std::to_string(static_cast<unsigned long>(index_cap) * k) +
                               " exceeds the exact-path cap " + std::to_string(kSweepDegreeCap));
    for (BoundSource s : bounds) {
        if (bounds::is_univariate(s) && k != 1)
            throw ConfigError(std::string(bounds::to_string(s)) + " is a univariate bound and needs k = 1");
        for (const auto& a : alpha_set)
            check_alpha_domain(s, a, theorem2_extended);
    }
}

// ---------------------------------------------------------------- exact decisions

namespace {

ExactScalar exact_value(const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x) {
    try {
        return mv::laguerre_mv(n, alpha, x);
    } catch (const PoleError&) {
        // Negative-integer alpha in the univariate bounds: the coefficient
        // form has no poles.
        return mv::gf_expansion_coeff(n, alpha, x);
    }
}

BoundExpr expr_at(BoundSource source, const mv::MultiIndex& n, const ExactScalar& alpha, const mv::EvalPoint& x) {
    const uv::UnivariateQuery q{n[0], alpha, x[0]};
    switch (source) {
    case BoundSource::theorem1: return bounds::theorem1_expr(n, alpha, x.max_norm());
    case BoundSource::theorem2: return bounds::theorem2_expr(n, alpha, x.max_norm());
    case BoundSource::szego: return uv::szego_bound(q);
    case BoundSource::rooney1: return uv::rooney_bound_1(q);
    case BoundSource::rooney2: return uv::rooney_bound_2(q);
    case BoundSource::lewandowski_szynal: return uv::lewandowski_szynal_bound(q);
    }
    throw std::logic_error("unhandled bound source");
}

BoundOutcome decide_exact(BoundSource source, const ExactScalar& value, const BoundExpr& expr) {
    BoundOutcome out;
    out.source = source;
    out.bound = expr.value();
    if (value == 0) {
        out.tightness = 0.0;
        out.verdict = Verdict::pass;
        return out;
    }
    out.tightness = expr.tightness_of(value);
    if (out.tightness < 0.999) {
        out.verdict = Verdict::pass;
        return out;
    }
    const ExactScalar magnitude = abs(value);
    const RationalBracket enc = expr.enclose();
    static const ExactScalar violation_factor = make_rational(1'000'000'001, 1'000'000'000);
    static const ExactScalar near_factor = make_rational(999'999, 1'000'000);
    if (magnitude > enc.hi * violation_factor)
        out.verdict = Verdict::violation;
    else if (magnitude <= enc.lo * near_factor)
        out.verdict = Verdict::pass;
    else
        out.verdict = Verdict::near_tight;
    return out;
}

}  // namespace

BoundOutcome recheck_exact(BoundSource source, const mv::MultiIndex& n, const ExactScalar& alpha,
                           const std::vector<ExactScalar>& x) {
    const mv::EvalPoint point(x);
    return decide_exact(source, exact_value(n, alpha, point), expr_at(source, n, alpha, point));
}

// ---------------------------------------------------------------- tasks

namespace {

struct PreparedBound {
    BoundSource source;
    double base = 0.0;               // bound without e^{norm/2}
    bool exponential = true;
    std::vector<double> polynomial;  // Lewandowski-Szynal coefficients
};

struct TaskResult {
    std::vector<SweepRecord> records;
    std::size_t count = 0;
    std::size_t violations = 0;
    std::size_t extended_violations = 0;
    std::size_t near_tight = 0;
    std::vector<MaxTightness> max_tightness;
};

struct Task {
    mv::MultiIndex n;
    ExactScalar alpha;
};

class TaskRunner {
public:
    explicit TaskRunner(const SweepConfig& c) : config_(c) {
        for (const auto& v : c.x_grid.values) {
            grid_d_.push_back(to_double(v));
            grid_exp_half_.push_back(std::exp(to_double(v) / 2.0));
        }
        lo_ = *std::min_element(c.x_grid.values.begin(), c.x_grid.values.end());
        hi_ = *std::max_element(c.x_grid.values.begin(), c.x_grid.values.end());
    }

    TaskResult run(const Task& task, std::uint64_t task_index) const {
        TaskResult out;
        for (BoundSource s : config_.bounds) {
            MaxTightness m;
            m.source = s;
            out.max_tightness.push_back(m);
        }
        const std::size_t k = config_.k;
        const bool float_path = config_.comparison_policy == ComparisonPolicy::float_guarded;
        const std::optional<mv::FloatMvEvaluator> evaluator =
            float_path ? std::optional<mv::FloatMvEvaluator>(std::in_place, task.n, task.alpha) : std::nullopt;
        const std::vector<PreparedBound> prepared = prepare(task);
        const bool extended_alpha = task.alpha <= make_rational(-1, 2);

        std::vector<double> xd(k);
        std::vector<ExactScalar> x_exact(k);

        auto visit = [&](double exp_half, auto&& materialize) {
            std::optional<ExactScalar> exact;
            std::optional<mv::EvalPoint> point;
            auto ensure_point = [&]() -> const mv::EvalPoint& {
                if (!point)
                    point.emplace(materialize());
                return *point;
            };
            auto ensure_exact = [&]() -> const ExactScalar& {
                if (!exact)
                    exact = exact_value(task.n, task.alpha, ensure_point());
                return *exact;
            };

            double value = 0.0;
            double error = 0.0;
            if (float_path) {
                auto r = (*evaluator)(xd);
                value = r.value;
                error = r.error_bound;
            } else {
                value = to_double(ensure_exact());
            }

            SweepRecord record;
            record.k = config_.k;
            record.asserted = true;
            for (std::size_t b = 0; b < prepared.size(); ++b) {
                const PreparedBound& pb = prepared[b];
                double bound;
                if (pb.exponential) {
                    bound = pb.base * exp_half;
                } else {
                    bound = 0.0;
                    for (auto it = pb.polynomial.rbegin(); it != pb.polynomial.rend(); ++it)
                        bound = bound * xd[0] + *it;
                }
                BoundOutcome outcome;
                const double upper = (std::fabs(value) + error) / (bound * (1.0 - 1e-12));
                if (std::isfinite(bound) && bound > 0.0 && upper <= kNearTightThreshold) {
                    outcome.source = pb.source;
                    outcome.bound = bound;
                    outcome.tightness = std::fabs(value) / bound;
                    outcome.verdict = Verdict::pass;
                } else {
                    const ExactScalar& v = ensure_exact();
                    value = to_double(v);
                    outcome = decide_exact(pb.source, v, expr_at(pb.source, task.n, task.alpha, ensure_point()));
                }
                const bool asserted = !(pb.source == BoundSource::theorem2 && extended_alpha);
                if (!asserted)
                    record.asserted = false;
                if (outcome.verdict == Verdict::violation)
                    ++(asserted ? out.violations : out.extended_violations);
                else if (outcome.verdict == Verdict::near_tight)
                    ++out.near_tight;
                MaxTightness& m = out.max_tightness[b];
                if (outcome.tightness > m.tightness) {
                    m.tightness = outcome.tightness;
                    m.n = task.n;
                    m.alpha = task.alpha;
                    m.x = ensure_point().coords();
                }
                record.outcomes.push_back(outcome);
            }
            ++out.count;
            if (config_.retain_records) {
                record.n = task.n;
                record.alpha = task.alpha;
                record.x = ensure_point().coords();
                record.value = value;
                out.records.push_back(std::move(record));
            }
        };

        if (config_.x_grid.mode == SamplingMode::grid) {
            const std::size_t g = grid_d_.size();
            std::vector<std::size_t> idx(k, 0);
            while (true) {
                double exp_half = 0.0;
                for (std::size_t j = 0; j < k; ++j) {
                    xd[j] = grid_d_[idx[j]];
                    exp_half = std::max(exp_half, grid_exp_half_[idx[j]]);
                }
                visit(exp_half, [&] {
                    std::vector<ExactScalar> c(k);
                    for (std::size_t j = 0; j < k; ++j)
                        c[j] = config_.x_grid.values[idx[j]];
                    return mv::EvalPoint(std::move(c));
                });
                std::size_t j = k;
                while (j > 0 && ++idx[j - 1] == g) {
                    idx[j - 1] = 0;
                    --j;
                }
                if (j == 0)
                    break;
            }
        } else {
            std::mt19937_64 engine(*config_.seed ^ task_index);
            constexpr long kDenominator = 1L << 20;
            std::uniform_int_distribution<long> draw(0, kDenominator);
            const ExactScalar width = hi_ - lo_;
            for (std::size_t s = 0; s < config_.sample_count; ++s) {
                double exp_half = 0.0;
                for (std::size_t j = 0; j < k; ++j) {
                    x_exact[j] = lo_ + width * make_rational(draw(engine), kDenominator);
                    xd[j] = to_double(x_exact[j]);
                    exp_half = std::max(exp_half, std::exp(xd[j] / 2.0));
                }
                visit(exp_half, [&] { return mv::EvalPoint(x_exact); });
            }
        }
        return out;
    }

private:
    std::vector<PreparedBound> prepare(const Task& task) const {
        std::vector<PreparedBound> out;
        const mv::EvalPoint origin(std::vector<ExactScalar>(config_.k, 0));
        for (BoundSource s : config_.bounds) {
            PreparedBound pb;
            pb.source = s;
            if (s == BoundSource::lewandowski_szynal) {
                pb.exponential = false;
                for (const auto& c : uv::lewandowski_szynal_polynomial(task.n[0], task.alpha))
                    pb.polynomial.push_back(to_double(c));
            } else {
                pb.base = expr_at(s, task.n, task.alpha, origin).value();
            }
            out.push_back(std::move(pb));
        }
        return out;
    }

    const SweepConfig& config_;
    std::vector<double> grid_d_;
    std::vector<double> grid_exp_half_;
    ExactScalar lo_;
    ExactScalar hi_;
};

}  // namespace

// ---------------------------------------------------------------- run_sweep

SweepResult run_sweep(const SweepConfig& config, unsigned threads) {
    config.validate();

    std::vector<Task> tasks;
    for (const auto& n : mv::indices_in_box(config.k, config.index_cap))
        for (const auto& a : config.alpha_set)
            tasks.push_back({n, a});

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));

    const TaskRunner runner(config);
    std::vector<TaskResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                results[i] = runner.run(tasks[i], i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = tasks.size();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult out;
    CampaignSummary& summary = out.summary;
    for (BoundSource s : config.bounds) {
        MaxTightness m;
        m.source = s;
        summary.max_tightness.push_back(m);
    }
    for (auto& r : results) {
        summary.records += r.count;
        summary.violations += r.violations;
        summary.extended_violations += r.extended_violations;
        summary.near_tight += r.near_tight;
        for (std::size_t b = 0; b < r.max_tightness.size(); ++b)
            if (r.max_tightness[b].tightness > summary.max_tightness[b].tightness)
                summary.max_tightness[b] = r.max_tightness[b];
        if (config.retain_records)
            std::move(r.records.begin(), r.records.end(), std::back_inserter(out.records));
    }
    summary.winners = diagonal_winners(config.k, std::min(config.index_cap, bounds::kExactEnvelopeCap));
    if (config.ratio_fit_n_max)
        summary.ratio_fit = adjudicate_asymptote(config.k, *config.ratio_fit_n_max);
    return out;
}

// ---------------------------------------------------------------- diagonal

std::vector<WinnerEntry> diagonal_winners(unsigned k, unsigned n_max) {
    std::vector<WinnerEntry> out;
    const ExactScalar reference_alpha = 1;
    for (unsigned n = 0; n <= n_max; ++n) {
        const mv::MultiIndex index = mv::MultiIndex::constant(k, n);
        const BoundExpr a = bounds::theorem1_expr(index, reference_alpha, 0);
        const BoundExpr b = bounds::theorem2_expr(index, reference_alpha, 0);
        // b = coefficient * sqrt(radicand) * 2^{k-1/2}
        const ExactScalar a_sq = a.coefficient * a.coefficient;
        const ExactScalar b_sq = b.coefficient * b.coefficient * b.radicand *
                                 ExactScalar(ExactInteger(1) << (2 * k - 1));
        Winner w = Winner::tie;
        if (a_sq < b_sq)
            w = Winner::theorem1;
        else if (b_sq < a_sq)
            w = Winner::theorem2;
        out.push_back({k, n, w});
    }
    return out;
}

AsymptoteReport adjudicate_asymptote(unsigned k, unsigned n_max) {
    if (n_max < 1000)
        throw DomainError("adjudicate_asymptote requires n_max >= 1000");
    std::vector<double> n_list;
    const double decades = std::log10(static_cast<double>(n_max));
    for (unsigned i = 0; i <= static_cast<unsigned>(std::floor(decades * 20.0)); ++i) {
        double n = std::round(std::pow(10.0, i / 20.0));
        if (n_list.empty() || n > n_list.back())
            n_list.push_back(n);
    }
    if (n_list.back() < n_max)
        n_list.push_back(n_max);

    const bounds::RatioFit fit = bounds::fit_ratio_exponent(k, n_list);
    AsymptoteReport r;
    r.k = k;
    r.n_max = n_max;
    r.slope = fit.slope;
    r.intercept = fit.intercept;
    r.residual = fit.residual;

    const double exponent = k / 4.0 - 0.5;
    double sum = 0.0;
    unsigned count = 0;
    for (double n : n_list) {
        if (n * 10.0 < n_max)
            continue;
        sum += std::exp(bounds::log_ab_ratio(n, k) - exponent * std::log(n));
        ++count;
    }
    r.fitted_constant = sum / count;
    r.paper_constant = bounds::asymptote_constant(k, bounds::AsymptoteForm::paper);
    r.derived_constant = bounds::asymptote_constant(k, bounds::AsymptoteForm::derived);
    const bool paper = std::fabs(r.fitted_constant / r.paper_constant - 1.0) <= 0.02;
    const bool derived = std::fabs(r.fitted_constant / r.derived_constant - 1.0) <= 0.02;
    r.verdict = paper && derived ? "BOTH" : paper ? "PAPER" : derived ? "DERIVED" : "NEITHER";
    return r;
}

}  // namespace mvlag::verify
