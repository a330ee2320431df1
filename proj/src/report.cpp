#include "mvlag/verify.hpp"

#include "json_writer.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mvlag::verify {

using json = nlohmann::ordered_json;

using detail::write_json;

namespace {

std::string join_indices(const mv::MultiIndex& n) {
    std::string s;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i)
            s += ';';
        s += std::to_string(n[i]);
    }
    return s;
}

std::string join_rationals(const std::vector<ExactScalar>& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i)
            s += ';';
        s += format_rational(x[i]);
    }
    return s;
}

json rationals_json(const std::vector<ExactScalar>& x) {
    json a = json::array();
    for (const auto& v : x)
        a.push_back(format_rational(v));
    return a;
}

json indices_json(const mv::MultiIndex& n) {
    json a = json::array();
    for (unsigned v : n.entries())
        a.push_back(v);
    return a;
}

ExactScalar rational_from_json(const json& j, const char* field) {
    try {
        if (j.is_string())
            return parse_rational(j.get<std::string>());
        if (j.is_number())
            return parse_rational(j.dump());  // shortest round-trip text, read as an exact decimal
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(field) + ": " + e.what());
    }
    throw ConfigError(std::string(field) + ": expected a number or a p/q string");
}

std::vector<ExactScalar> rationals_from_json(const json& j, const char* field) {
    if (!j.is_array())
        throw ConfigError(std::string(field) + ": expected an array");
    std::vector<ExactScalar> out;
    for (const auto& v : j)
        out.push_back(rational_from_json(v, field));
    return out;
}

mv::MultiIndex index_from_json(const json& j) {
    std::vector<unsigned> entries;
    for (const auto& v : j)
        entries.push_back(v.get<unsigned>());
    return mv::MultiIndex(std::move(entries));
}

double float_from_json(const json& j) {
    return j.is_null() ? std::nan("") : j.get<double>();
}

json record_row(const SweepRecord& r, const BoundOutcome& o) {
    json row;
    row["k"] = r.k;
    row["n_vec"] = indices_json(r.n);
    row["alpha"] = format_rational(r.alpha);
    row["x_vec"] = rationals_json(r.x);
    row["value"] = r.value;
    row["bound_source"] = bounds::to_string(o.source);
    row["bound"] = o.bound;
    row["tightness"] = o.tightness;
    row["verdict"] = to_string(o.verdict);
    return row;
}

json summary_json(const CampaignSummary& s) {
    json j;
    j["records"] = s.records;
    j["violations"] = s.violations;
    j["extended_violations"] = s.extended_violations;
    j["near_tight"] = s.near_tight;
    json mt = json::array();
    for (const auto& m : s.max_tightness) {
        json e;
        e["bound_source"] = bounds::to_string(m.source);
        e["tightness"] = m.tightness;
        e["n_vec"] = m.n.size() ? indices_json(m.n) : json::array();
        e["alpha"] = format_rational(m.alpha);
        e["x_vec"] = rationals_json(m.x);
        mt.push_back(std::move(e));
    }
    j["max_tightness"] = std::move(mt);
    json w = json::array();
    for (const auto& e : s.winners)
        w.push_back({{"k", e.k}, {"n", e.n}, {"winner", to_string(e.winner)}});
    j["winners"] = std::move(w);
    if (s.ratio_fit) {
        const AsymptoteReport& r = *s.ratio_fit;
        j["ratio_fit"] = {{"k", r.k},
                          {"n_max", r.n_max},
                          {"slope", r.slope},
                          {"intercept", r.intercept},
                          {"residual", r.residual},
                          {"fitted_constant", r.fitted_constant},
                          {"paper_constant", r.paper_constant},
                          {"derived_constant", r.derived_constant},
                          {"verdict", r.verdict}};
    } else {
        j["ratio_fit"] = nullptr;
    }
    return j;
}

template <class Emit>
void to_file(const std::string& path, Emit&& emit) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    emit(file);
    file.flush();
    if (!file)
        throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void emit_records(const std::vector<SweepRecord>& records, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::csv) {
        out << "k,n_vec,alpha,x_vec,value,bound_source,bound,tightness,verdict\n";
        for (const auto& r : records) {
            const std::string prefix = std::to_string(r.k) + ',' + join_indices(r.n) + ',' +
                                       format_rational(r.alpha) + ',' + join_rationals(r.x) + ',' +
                                       format_double(r.value) + ',';
            for (const auto& o : r.outcomes)
                out << prefix << bounds::to_string(o.source) << ',' << format_double(o.bound) << ','
                    << format_double(o.tightness) << ',' << to_string(o.verdict) << '\n';
        }
        return;
    }
    out << "[\n";
    bool first = true;
    for (const auto& r : records) {
        for (const auto& o : r.outcomes) {
            if (!first)
                out << ",\n";
            first = false;
            write_json(record_row(r, o), out);
        }
    }
    out << (first ? "]\n" : "\n]\n");
}

void emit_summary(const CampaignSummary& summary, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::json) {
        out << summary_to_json(summary);
        return;
    }
    out << "metric,bound_source,value,n_vec,alpha,x_vec\n";
    out << "records,," << summary.records << ",,,\n";
    out << "violations,," << summary.violations << ",,,\n";
    out << "extended_violations,," << summary.extended_violations << ",,,\n";
    out << "near_tight,," << summary.near_tight << ",,,\n";
    for (const auto& m : summary.max_tightness)
        out << "max_tightness," << bounds::to_string(m.source) << ',' << format_double(m.tightness) << ','
            << join_indices(m.n) << ',' << format_rational(m.alpha) << ',' << join_rationals(m.x) << '\n';
    for (const auto& w : summary.winners)
        out << "winner,k=" << w.k << ';' << "n=" << w.n << ',' << to_string(w.winner) << ",,,\n";
    if (summary.ratio_fit) {
        const AsymptoteReport& r = *summary.ratio_fit;
        out << "ratio_slope,k=" << r.k << ',' << format_double(r.slope) << ",,,\n";
        out << "ratio_intercept,k=" << r.k << ',' << format_double(r.intercept) << ",,,\n";
        out << "ratio_residual,k=" << r.k << ',' << format_double(r.residual) << ",,,\n";
        out << "ratio_fitted_constant,k=" << r.k << ',' << format_double(r.fitted_constant) << ",,,\n";
        out << "ratio_verdict,k=" << r.k << ',' << r.verdict << ",,,\n";
    }
}

void emit_records(const std::vector<SweepRecord>& records, ReportFormat format, const std::string& path) {
    to_file(path, [&](std::ostream& out) { emit_records(records, format, out); });
}

void emit_summary(const CampaignSummary& summary, ReportFormat format, const std::string& path) {
    to_file(path, [&](std::ostream& out) { emit_summary(summary, format, out); });
}

std::string summary_to_json(const CampaignSummary& summary) {
    std::ostringstream out;
    write_json(summary_json(summary), out);
    out << '\n';
    return out.str();
}

CampaignSummary summary_from_json(const std::string& text) {
    const json j = json::parse(text);
    CampaignSummary s;
    s.records = j.at("records").get<std::size_t>();
    s.violations = j.at("violations").get<std::size_t>();
    s.extended_violations = j.at("extended_violations").get<std::size_t>();
    s.near_tight = j.at("near_tight").get<std::size_t>();
    for (const auto& e : j.at("max_tightness")) {
        MaxTightness m;
        m.source = bounds::parse_bound_source(e.at("bound_source").get<std::string>());
        m.tightness = float_from_json(e.at("tightness"));
        if (!e.at("n_vec").empty())
            m.n = index_from_json(e.at("n_vec"));
        m.alpha = parse_rational(e.at("alpha").get<std::string>());
        for (const auto& x : e.at("x_vec"))
            m.x.push_back(parse_rational(x.get<std::string>()));
        s.max_tightness.push_back(std::move(m));
    }
    for (const auto& e : j.at("winners")) {
        WinnerEntry w;
        w.k = e.at("k").get<unsigned>();
        w.n = e.at("n").get<unsigned>();
        const std::string name = e.at("winner").get<std::string>();
        w.winner = name == "theorem1" ? Winner::theorem1 : name == "theorem2" ? Winner::theorem2 : Winner::tie;
        s.winners.push_back(w);
    }
    const json& rf = j.at("ratio_fit");
    if (!rf.is_null()) {
        AsymptoteReport r;
        r.k = rf.at("k").get<unsigned>();
        r.n_max = rf.at("n_max").get<unsigned>();
        r.slope = float_from_json(rf.at("slope"));
        r.intercept = float_from_json(rf.at("intercept"));
        r.residual = float_from_json(rf.at("residual"));
        r.fitted_constant = float_from_json(rf.at("fitted_constant"));
        r.paper_constant = float_from_json(rf.at("paper_constant"));
        r.derived_constant = float_from_json(rf.at("derived_constant"));
        r.verdict = rf.at("verdict").get<std::string>();
        s.ratio_fit = std::move(r);
    }
    return s;
}

// ---------------------------------------------------------------- config

SweepConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    static const std::vector<std::string> known = {
        "k",      "index_cap",         "alpha_set",         "x_grid",         "sample_count",   "seed",
        "bounds", "comparison_policy", "theorem2_extended", "retain_records", "ratio_fit_n_max"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config field '" + key + "'");
    for (const char* required : {"k", "index_cap", "alpha_set", "x_grid", "bounds"})
        if (!j.contains(required))
            throw ConfigError(std::string("missing config field '") + required + "'");

    SweepConfig c;
    try {
        c.k = j.at("k").get<unsigned>();
        c.index_cap = j.at("index_cap").get<unsigned>();
        if (j.contains("sample_count"))
            c.sample_count = j.at("sample_count").get<std::size_t>();
        if (j.contains("seed") && !j.at("seed").is_null())
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("theorem2_extended"))
            c.theorem2_extended = j.at("theorem2_extended").get<bool>();
        if (j.contains("retain_records"))
            c.retain_records = j.at("retain_records").get<bool>();
        if (j.contains("ratio_fit_n_max") && !j.at("ratio_fit_n_max").is_null())
            c.ratio_fit_n_max = j.at("ratio_fit_n_max").get<unsigned>();
        if (j.contains("comparison_policy")) {
            const std::string p = j.at("comparison_policy").get<std::string>();
            if (p == "float_guarded")
                c.comparison_policy = ComparisonPolicy::float_guarded;
            else if (p == "exact_fallback")
                c.comparison_policy = ComparisonPolicy::exact_fallback;
            else
                throw ConfigError("comparison_policy must be float_guarded or exact_fallback");
        }
        for (const auto& b : j.at("bounds"))
            c.bounds.push_back(bounds::parse_bound_source(b.get<std::string>()));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    } catch (const std::invalid_argument& e) {
        if (dynamic_cast<const ConfigError*>(&e))
            throw;
        throw ConfigError(e.what());
    }
    c.alpha_set = rationals_from_json(j.at("alpha_set"), "alpha_set");

    const json& grid = j.at("x_grid");
    if (!grid.is_object())
        throw ConfigError("x_grid must be an object");
    const std::string mode = grid.value("mode", std::string("grid"));
    if (mode == "grid")
        c.x_grid.mode = SamplingMode::grid;
    else if (mode == "random")
        c.x_grid.mode = SamplingMode::random;
    else
        throw ConfigError("x_grid.mode must be grid or random");
    if (grid.contains("values")) {
        c.x_grid.values = rationals_from_json(grid.at("values"), "x_grid.values");
    } else if (grid.contains("start") && grid.contains("stop") && grid.contains("step")) {
        const ExactScalar start = rational_from_json(grid.at("start"), "x_grid.start");
        const ExactScalar stop = rational_from_json(grid.at("stop"), "x_grid.stop");
        const ExactScalar step = rational_from_json(grid.at("step"), "x_grid.step");
        if (step <= 0)
            throw ConfigError("x_grid.step must be positive");
        for (ExactScalar v = start; v <= stop; v += step)
            c.x_grid.values.push_back(v);
    } else {
        throw ConfigError("x_grid needs 'values' or 'start'/'stop'/'step'");
    }
    return c;
}

std::string config_to_json(const SweepConfig& c) {
    json j;
    j["k"] = c.k;
    j["index_cap"] = c.index_cap;
    j["alpha_set"] = rationals_json(c.alpha_set);
    j["x_grid"] = {{"mode", to_string(c.x_grid.mode)}, {"values", rationals_json(c.x_grid.values)}};
    j["sample_count"] = c.sample_count;
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    json b = json::array();
    for (auto s : c.bounds)
        b.push_back(bounds::to_string(s));
    j["bounds"] = std::move(b);
    j["comparison_policy"] = to_string(c.comparison_policy);
    j["theorem2_extended"] = c.theorem2_extended;
    j["retain_records"] = c.retain_records;
    j["ratio_fit_n_max"] = c.ratio_fit_n_max ? json(*c.ratio_fit_n_max) : json(nullptr);
    std::ostringstream out;
    write_json(j, out);
    out << '\n';
    return out.str();
}

}  // namespace mvlag::verify
