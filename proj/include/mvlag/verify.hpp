#pragma once

/**
 * @file verify.hpp
 * @brief Inequality campaigns over parameter grids and seeded random samples.
 *
 * A campaign fixes k, a box of multi-indices, a set of alpha values, a set of
 * evaluation points and a list of bounds. Every (n, alpha) pair is one task;
 * tasks run on worker threads and their partial summaries are merged in task
 * order, so reports are byte-identical for any thread count.
 *
 * Verdicts per (record, bound), with t = |L| / bound:
 *  - PASS        t <= 1 - 1e-6
 *  - NEAR_TIGHT  1 - 1e-6 < t <= 1 + 1e-9
 *  - VIOLATION   t > 1 + 1e-9, confirmed against a rational enclosure of the bound
 * Anything that is not a clear float PASS is re-decided exactly.
 */

#include "mvlag/bounds.hpp"
#include "mvlag/multivariate.hpp"
#include "mvlag/numerics.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvlag::verify {

inline constexpr double kNearTightThreshold = 1.0 - 1e-6;
inline constexpr double kViolationThreshold = 1.0 + 1e-9;
// index_cap * k beyond this is rejected before any work is done.
inline constexpr unsigned kSweepDegreeCap = 64;

// A malformed or inconsistent campaign description.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

enum class SamplingMode { grid, random };

enum class ComparisonPolicy {
    float_guarded,   // float evaluation with an a-priori error bound, exact when undecided
    exact_fallback,  // exact evaluation of L for every record, exact bound when near tight
};

enum class Verdict { pass, near_tight, violation };

std::string_view to_string(Verdict v);
std::string_view to_string(ComparisonPolicy p);
std::string_view to_string(SamplingMode m);

struct XGrid {
    SamplingMode mode = SamplingMode::grid;
    // Grid mode: the coordinate set. Random mode: coordinates are drawn
    // uniformly (as rationals with denominator 2^20) from [min, max] of it.
    std::vector<ExactScalar> values;
};

struct SweepConfig {
    unsigned k = 1;
    unsigned index_cap = 0;
    std::vector<ExactScalar> alpha_set;
    XGrid x_grid;
    std::size_t sample_count = 0;
    std::optional<std::uint64_t> seed;
    std::vector<bounds::BoundSource> bounds;
    ComparisonPolicy comparison_policy = ComparisonPolicy::exact_fallback;
    bool theorem2_extended = false;
    bool retain_records = true;
    std::optional<unsigned> ratio_fit_n_max;

    // Throws ConfigError, or CapExceededError for infeasible sizes.
    void validate() const;
};

struct BoundOutcome {
    bounds::BoundSource source = bounds::BoundSource::theorem1;
    double bound = 0.0;
    double tightness = 0.0;
    Verdict verdict = Verdict::pass;

    bool operator==(const BoundOutcome&) const = default;
};

struct SweepRecord {
    unsigned k = 1;
    mv::MultiIndex n;
    ExactScalar alpha;
    std::vector<ExactScalar> x;
    double value = 0.0;
    std::vector<BoundOutcome> outcomes;
    bool asserted = true;  // false for theorem2 records with alpha <= -1/2
};

struct MaxTightness {
    bounds::BoundSource source = bounds::BoundSource::theorem1;
    double tightness = -1.0;
    mv::MultiIndex n;
    ExactScalar alpha;
    std::vector<ExactScalar> x;

    bool operator==(const MaxTightness&) const = default;
};

enum class Winner { theorem1, theorem2, tie };
std::string_view to_string(Winner w);

struct WinnerEntry {
    unsigned k = 1;
    unsigned n = 0;
    Winner winner = Winner::tie;

    bool operator==(const WinnerEntry&) const = default;
};

struct AsymptoteReport {
    unsigned k = 2;
    unsigned n_max = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    double fitted_constant = 0.0;
    double paper_constant = 0.0;
    double derived_constant = 0.0;
    std::string verdict;  // PAPER, DERIVED, BOTH or NEITHER

    bool operator==(const AsymptoteReport&) const = default;
};

struct CampaignSummary {
    std::size_t records = 0;
    std::size_t violations = 0;           // asserted domain only
    std::size_t extended_violations = 0;  // reported, not asserted
    std::size_t near_tight = 0;
    std::vector<MaxTightness> max_tightness;  // one per configured bound
    std::vector<WinnerEntry> winners;
    std::optional<AsymptoteReport> ratio_fit;

    bool operator==(const CampaignSummary&) const = default;
};

struct SweepResult {
    std::vector<SweepRecord> records;  // empty unless retain_records
    CampaignSummary summary;
};

// threads == 0 uses the machine's hardware concurrency.
SweepResult run_sweep(const SweepConfig& config, unsigned threads = 0);

// Re-derives one (record, bound) verdict from scratch through exact L.
BoundOutcome recheck_exact(bounds::BoundSource source, const mv::MultiIndex& n, const ExactScalar& alpha,
                           const std::vector<ExactScalar>& x);

// Winner per diagonal index n = 0..n_max, from exact comparison of the two
// bound coefficients squared.
std::vector<WinnerEntry> diagonal_winners(unsigned k, unsigned n_max);

// Log-spaced n from 1 to n_max (20 per decade), fit of ln(A_n/B_n) on ln n,
// fitted constant = mean of (A_n/B_n) / n^{k/4-1/2} over n >= n_max/10, and
// the closed-form constant(s) within 2% of it.
AsymptoteReport adjudicate_asymptote(unsigned k, unsigned n_max);

// ---------------------------------------------------------------- reports

enum class ReportFormat { csv, json };

// CSV header: k,n_vec,alpha,x_vec,value,bound_source,bound,tightness,verdict
void emit_records(const std::vector<SweepRecord>& records, ReportFormat format, std::ostream& out);
void emit_summary(const CampaignSummary& summary, ReportFormat format, std::ostream& out);
// File variants; throw std::runtime_error naming the path on I/O failure.
void emit_records(const std::vector<SweepRecord>& records, ReportFormat format, const std::string& path);
void emit_summary(const CampaignSummary& summary, ReportFormat format, const std::string& path);

std::string summary_to_json(const CampaignSummary& summary);
CampaignSummary summary_from_json(const std::string& text);

SweepConfig config_from_json(const std::string& text);
std::string config_to_json(const SweepConfig& config);

}  // namespace mvlag::verify
