#include "mvlag/cli.hpp"

#include "json_writer.hpp"
#include "mvlag/bounds.hpp"
#include "mvlag/dirichlet.hpp"
#include "mvlag/errors.hpp"
#include "mvlag/multivariate.hpp"
#include "mvlag/univariate.hpp"
#include "mvlag/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace mvlag::cli {

namespace {

using json = nlohmann::ordered_json;
using bounds::BoundSource;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        parts.push_back(item);
    if (!text.empty() && text.back() == ',')
        parts.emplace_back();
    return parts;
}

std::vector<unsigned> parse_indices(const std::string& text, const char* flag) {
    std::vector<unsigned> out;
    for (const auto& part : split_csv(text)) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            if (part.empty() || part[0] == '-')
                throw std::invalid_argument(part);
            v = std::stoul(part, &used);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": '" + part + "' is not a non-negative integer");
        }
        if (used != part.size() || v > 100000)
            throw UsageError(std::string(flag) + ": '" + part + "' is not a non-negative integer <= 100000");
        out.push_back(static_cast<unsigned>(v));
    }
    if (out.empty())
        throw UsageError(std::string(flag) + ": expected a comma-separated list");
    return out;
}

ExactScalar parse_scalar(const std::string& text, const char* flag) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

std::vector<ExactScalar> parse_scalars(const std::string& text, const char* flag) {
    std::vector<ExactScalar> out;
    for (const auto& part : split_csv(text))
        out.push_back(parse_scalar(part, flag));
    if (out.empty())
        throw UsageError(std::string(flag) + ": expected a comma-separated list");
    return out;
}

void require_length(std::size_t got, unsigned k, const char* flag) {
    if (got != k)
        throw UsageError(std::string(flag) + " has " + std::to_string(got) + " entries but --k is " +
                         std::to_string(k));
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            s += sep;
        s += parts[i];
    }
    return s;
}

std::vector<std::string> rational_strings(const std::vector<ExactScalar>& v) {
    std::vector<std::string> out;
    for (const auto& x : v)
        out.push_back(format_rational(x));
    return out;
}

// Renders a flat object: text as "key: value" lines, csv as header + row.
void emit_object(const json& obj, const std::string& format, std::ostream& out) {
    auto scalar_text = [](const json& v, const char* sep) -> std::string {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_number_float())
            return format_double(v.get<double>());
        if (v.is_array()) {
            std::vector<std::string> parts;
            for (const auto& e : v)
                parts.push_back(e.is_string() ? e.get<std::string>()
                                : e.is_number_float() ? format_double(e.get<double>())
                                                      : e.dump());
            return join(parts, sep);
        }
        if (v.is_null())
            return "";
        return v.dump();
    };
    if (format == "json") {
        detail::write_json(obj, out);
        out << '\n';
    } else if (format == "csv") {
        std::vector<std::string> keys, values;
        for (const auto& [key, value] : obj.items()) {
            keys.push_back(key);
            values.push_back(scalar_text(value, ";"));
        }
        out << join(keys, ",") << '\n' << join(values, ",") << '\n';
    } else {
        for (const auto& [key, value] : obj.items())
            out << key << ": " << scalar_text(value, ",") << '\n';
    }
}

json rationals_json(const std::vector<ExactScalar>& v) {
    json a = json::array();
    for (const auto& s : rational_strings(v))
        a.push_back(s);
    return a;
}

json indices_json(const mv::MultiIndex& n) {
    json a = json::array();
    for (unsigned v : n.entries())
        a.push_back(v);
    return a;
}

// ---------------------------------------------------------------- commands

struct PointArgs {
    unsigned k = 0;
    std::string n;
    std::string alpha;
    std::string x;
};

struct ParsedPoint {
    mv::MultiIndex n;
    ExactScalar alpha;
    std::vector<ExactScalar> x;
};

ParsedPoint parse_point(const PointArgs& a) {
    if (a.k < 1)
        throw UsageError("--k must be >= 1");
    ParsedPoint p;
    const auto entries = parse_indices(a.n, "--n");
    require_length(entries.size(), a.k, "--n");
    p.n = mv::MultiIndex(entries);
    p.alpha = parse_scalar(a.alpha, "--alpha");
    p.x = parse_scalars(a.x, "--x");
    require_length(p.x.size(), a.k, "--x");
    return p;
}

int cmd_eval(const PointArgs& args, const std::string& method, const std::string& format, std::ostream& out) {
    const ParsedPoint p = parse_point(args);
    const mv::EvalPoint x(p.x);
    std::optional<ExactScalar> explicit_value;
    std::optional<ExactScalar> gf_value;
    if (method == "explicit" || method == "both")
        explicit_value = mv::laguerre_mv(p.n, p.alpha, x);
    if (method == "gf" || method == "both")
        gf_value = mv::gf_expansion_coeff(p.n, p.alpha, x);

    if (format == "text") {
        if (method == "both") {
            out << "explicit: " << format_rational(*explicit_value) << '\n';
            out << "gf: " << format_rational(*gf_value) << '\n';
            out << (*explicit_value == *gf_value ? "AGREE" : "DISAGREE") << '\n';
        } else {
            out << format_rational(explicit_value ? *explicit_value : *gf_value) << '\n';
        }
    } else {
        json obj;
        obj["k"] = args.k;
        obj["n_vec"] = indices_json(p.n);
        obj["alpha"] = format_rational(p.alpha);
        obj["x_vec"] = rationals_json(p.x);
        if (explicit_value)
            obj["explicit"] = format_rational(*explicit_value);
        if (gf_value)
            obj["gf"] = format_rational(*gf_value);
        if (method == "both")
            obj["agree"] = *explicit_value == *gf_value;
        emit_object(obj, format, out);
    }
    return (method == "both" && *explicit_value != *gf_value) ? kViolation : kOk;
}

struct BoundArgs {
    PointArgs point;
    std::optional<unsigned> theorem;
    std::string source;
};

int cmd_bound(const BoundArgs& args, bool check, const std::string& format, std::ostream& out) {
    const ParsedPoint p = parse_point(args.point);
    const mv::EvalPoint x(p.x);
    if (args.theorem.has_value() == !args.source.empty())
        throw UsageError("give exactly one of --theorem or --source");

    BoundSource source;
    if (args.theorem) {
        source = *args.theorem == 1 ? BoundSource::theorem1 : BoundSource::theorem2;
        // At k = 1 the first bound is Szego's, whose domain includes alpha = 0.
        if (source == BoundSource::theorem1 && args.point.k == 1 && p.alpha == 0)
            source = BoundSource::szego;
    } else {
        try {
            source = bounds::parse_bound_source(args.source);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--source: ") + e.what());
        }
        if (bounds::is_univariate(source) && args.point.k != 1)
            throw UsageError("--source " + args.source + " needs --k 1");
    }

    BoundExpr expr;
    bool extended = false;
    const uv::UnivariateQuery q{p.n[0], p.alpha, p.x[0]};
    switch (source) {
    case BoundSource::theorem1: expr = bounds::theorem1_expr(p.n, p.alpha, x.max_norm()); break;
    case BoundSource::theorem2: expr = bounds::theorem2_expr(p.n, p.alpha, x.max_norm()); break;
    case BoundSource::szego: expr = uv::szego_bound(q); break;
    case BoundSource::rooney1: expr = uv::rooney_bound_1(q); break;
    case BoundSource::rooney2: expr = uv::rooney_bound_2(q); break;
    case BoundSource::lewandowski_szynal: expr = uv::lewandowski_szynal_bound(q); break;
    }
    if (source == BoundSource::theorem1)
        bounds::theorem1_bound(p.n, p.alpha, mv::EvalPoint(std::vector<ExactScalar>(p.x.size(), 0)));
    if (source == BoundSource::theorem2) {
        const auto r = bounds::theorem2_bound(p.n, p.alpha, mv::EvalPoint(std::vector<ExactScalar>(p.x.size(), 0)),
                                              bounds::Theorem2Domain::extended);
        extended = r.extended_domain;
    }
    if (!x.nonnegative())
        throw DomainError("bounds require x_j >= 0");

    const verify::BoundOutcome outcome = verify::recheck_exact(source, p.n, p.alpha, p.x);
    const BoundExpr coefficient = expr.without_exponential();

    json obj;
    obj["bound_source"] = bounds::to_string(source);
    obj["k"] = args.point.k;
    obj["n_vec"] = indices_json(p.n);
    obj["alpha"] = format_rational(p.alpha);
    obj["x_vec"] = rationals_json(p.x);
    if (coefficient.radicand == 1 && coefficient.pow2_exponent == 0)
        obj["coefficient"] = format_rational(coefficient.coefficient);
    else
        obj["coefficient"] = coefficient.value();
    obj["bound"] = outcome.bound;
    obj["tightness"] = outcome.tightness;
    if (check)
        obj["verdict"] = std::string(verify::to_string(outcome.verdict)) + (extended ? " EXTENDED-DOMAIN" : "");
    else if (extended)
        obj["domain"] = "EXTENDED-DOMAIN";
    emit_object(obj, format, out);
    if (check && !extended && outcome.verdict == verify::Verdict::violation)
        return kViolation;
    return kOk;
}

struct SweepArgs {
    std::string config;
    std::string records;
    std::string summary;
    unsigned threads = 0;
};

// A .csv or .json extension overrides --format for that file.
verify::ReportFormat file_format(const std::string& path, verify::ReportFormat fallback) {
    const auto ext = std::filesystem::path(path).extension();
    if (ext == ".csv")
        return verify::ReportFormat::csv;
    if (ext == ".json")
        return verify::ReportFormat::json;
    return fallback;
}

int cmd_sweep(const SweepArgs& args, const std::string& format, std::ostream& out) {
    std::ifstream in(args.config, std::ios::binary);
    if (!in)
        throw IoError("cannot read config '" + args.config + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw IoError("cannot read config '" + args.config + "'");

    verify::SweepConfig config = verify::config_from_json(buffer.str());
    config.retain_records = config.retain_records || !args.records.empty();
    verify::SweepResult result;
    try {
        result = verify::run_sweep(config, args.threads);
    } catch (const CapExceededError& e) {
        throw verify::ConfigError(e.what());
    }

    const auto report_format = format == "csv" ? verify::ReportFormat::csv : verify::ReportFormat::json;
    try {
        if (!args.records.empty())
            verify::emit_records(result.records, file_format(args.records, report_format), args.records);
        if (!args.summary.empty())
            verify::emit_summary(result.summary, file_format(args.summary, report_format), args.summary);
        else
            verify::emit_summary(result.summary, report_format, out);
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
    return result.summary.violations > 0 ? kViolation : kOk;
}

int cmd_diagonal(unsigned k, const std::string& alpha_text, const std::string& x_text, unsigned N,
                 const std::string& format, std::ostream& out) {
    if (k < 1)
        throw UsageError("--k must be >= 1");
    const ExactScalar alpha = parse_scalar(alpha_text, "--alpha");
    const auto x = parse_scalars(x_text, "--x");
    require_length(x.size(), k, "--x");
    const auto values = mv::diagonal_sequence(alpha, mv::EvalPoint(x), N);
    if (format == "text") {
        out << join(rational_strings(values), ", ") << '\n';
        return kOk;
    }
    json obj;
    obj["k"] = k;
    obj["alpha"] = format_rational(alpha);
    obj["x_vec"] = rationals_json(x);
    obj["N"] = N;
    obj["values"] = rationals_json(values);
    emit_object(obj, format, out);
    return kOk;
}

struct McArgs {
    std::optional<unsigned> k;
    std::string n;
    std::string alphas;
    std::string beta;
    std::string x;
    std::optional<unsigned> theorem;
    std::string alpha;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
};

int cmd_mc_check(const McArgs& a, const std::string& format, std::ostream& out) {
    const mv::MultiIndex n(parse_indices(a.n, "--n"));
    const auto x = parse_scalars(a.x, "--x");
    require_length(x.size(), static_cast<unsigned>(n.size()), "--x");
    if (a.k)
        require_length(n.size(), *a.k, "--n");

    dirichlet::McComparison cmp;
    json obj;
    obj["k"] = n.size();
    obj["n_vec"] = indices_json(n);
    if (a.theorem) {
        if (!a.alphas.empty() || !a.beta.empty())
            throw UsageError("--theorem takes --alpha, not --alphas/--beta");
        if (a.alpha.empty())
            throw UsageError("--theorem needs --alpha");
        const ExactScalar alpha = parse_scalar(a.alpha, "--alpha");
        const auto variant = *a.theorem == 1 ? mv::ChainVariant::theorem1 : mv::ChainVariant::theorem2;
        cmp = dirichlet::specialization_check(n, alpha, mv::EvalPoint(x), variant, a.samples, a.seed);
        obj["theorem"] = *a.theorem;
        obj["alpha"] = format_rational(alpha);
    } else {
        if (a.alphas.empty() || a.beta.empty())
            throw UsageError("give --alphas and --beta, or --theorem and --alpha");
        const auto alphas = parse_scalars(a.alphas, "--alphas");
        require_length(alphas.size(), static_cast<unsigned>(n.size()), "--alphas");
        const ExactScalar beta = parse_scalar(a.beta, "--beta");
        cmp = dirichlet::integral_repr_check(n, alphas, beta, mv::EvalPoint(x), a.samples, a.seed);
        obj["alphas"] = rationals_json(alphas);
        obj["beta"] = format_rational(beta);
    }
    obj["x_vec"] = rationals_json(x);
    obj["samples"] = a.samples;
    obj["seed"] = a.seed;
    obj["lhs"] = cmp.lhs;
    obj["estimate"] = cmp.mc_estimate;
    obj["std_error"] = cmp.std_error;
    obj["z"] = cmp.std_error > 0 ? (cmp.mc_estimate - cmp.lhs) / cmp.std_error : 0.0;
    const bool ok = cmp.within(3.0);
    obj["verdict"] = ok ? "WITHIN_3SE" : "OUTSIDE_3SE";
    emit_object(obj, format, out);
    return ok ? kOk : kViolation;
}

int cmd_ratio(unsigned k, unsigned n_max, const std::string& format, std::ostream& out) {
    if (k < 1)
        throw UsageError("--k must be >= 1");
    const verify::AsymptoteReport r = verify::adjudicate_asymptote(k, n_max);
    json obj;
    obj["k"] = r.k;
    obj["n_max"] = r.n_max;
    obj["slope"] = r.slope;
    obj["expected_slope"] = k / 4.0 - 0.5;
    obj["intercept"] = r.intercept;
    obj["residual"] = r.residual;
    obj["fitted_constant"] = r.fitted_constant;
    obj["paper_constant"] = r.paper_constant;
    obj["derived_constant"] = r.derived_constant;
    obj["verdict"] = r.verdict;
    emit_object(obj, format, out);
    return kOk;
}

void add_point_options(CLI::App* cmd, PointArgs& p) {
    cmd->add_option("--k", p.k, "number of variables, integer >= 1")->required();
    cmd->add_option("--n", p.n, "multi-index, k comma-separated integers >= 0")->required();
    cmd->add_option("--alpha", p.alpha, "parameter, rational p/q or exact decimal")->required();
    cmd->add_option("--x", p.x, "point, k comma-separated rationals (>= 0 for bounds)")->required();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multivariate Laguerre polynomials: exact evaluation, bounds and verification campaigns", "mvlag"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    PointArgs eval_args;
    std::string method = "explicit";
    auto* eval = app.add_subcommand("eval", "evaluate L_n^(alpha)(x) exactly");
    add_point_options(eval, eval_args);
    eval->add_option("--method", method, "explicit (Phi2 form), gf (generating-function coefficient) or both")
        ->check(CLI::IsMember({"explicit", "gf", "both"}));

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "print a bound with its coefficient and tightness");
    BoundArgs check_args;
    auto* check = app.add_subcommand("check", "print a bound and its verdict; exit 1 on an asserted violation");
    for (auto [cmd, a] : {std::pair{bound, &bound_args}, std::pair{check, &check_args}}) {
        add_point_options(cmd, a->point);
        cmd->add_option("--theorem", a->theorem, "multivariate bound, 1 (alpha > 0) or 2 (alpha > -1)")
            ->check(CLI::IsMember({1u, 2u}));
        cmd->add_option("--source", a->source,
                        "named bound: theorem1, theorem2, szego, rooney1, rooney2, lewandowski_szynal "
                        "(the last four need k = 1)");
    }

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "run a verification campaign; exit 1 on any asserted violation");
    sweep->add_option("--config", sweep_args.config, "path of the campaign JSON")->required();
    sweep->add_option("--records", sweep_args.records, "write per-record report to this path");
    sweep->add_option("--summary", sweep_args.summary, "write summary to this path (default: stdout)");
    sweep->add_option("--threads", sweep_args.threads, "worker threads, integer >= 0 (0 = all cores)");

    unsigned diag_k = 0;
    unsigned diag_n = 0;
    std::string diag_alpha, diag_x;
    auto* diagonal = app.add_subcommand("diagonal", "print L_{n,..,n}^(alpha)(x) for n = 0..N");
    diagonal->add_option("--k", diag_k, "number of variables, integer >= 1")->required();
    diagonal->add_option("--alpha", diag_alpha, "parameter, rational")->required();
    diagonal->add_option("--x", diag_x, "point, k comma-separated rationals")->required();
    diagonal->add_option("--N", diag_n, "last diagonal index, integer >= 0 with N*k <= 240")->required();

    McArgs mc;
    auto* mc_check = app.add_subcommand("mc-check", "Monte-Carlo check of the simplex integral representation");
    mc_check->add_option("--k", mc.k, "number of variables, integer >= 1 (checked against --n)");
    mc_check->add_option("--n", mc.n, "multi-index, comma-separated integers >= 0")->required();
    mc_check->add_option("--x", mc.x, "point, comma-separated rationals")->required();
    mc_check->add_option("--alphas", mc.alphas, "per-coordinate parameters, rationals > -1");
    mc_check->add_option("--beta", mc.beta, "simplex parameter, rational > -1");
    mc_check->add_option("--theorem", mc.theorem, "use the specialization of bound 1 (alpha > 0) or 2 (alpha > -1/2)")
        ->check(CLI::IsMember({1u, 2u}));
    mc_check->add_option("--alpha", mc.alpha, "parameter for --theorem, rational");
    mc_check->add_option("--samples", mc.samples, "sample count, integer >= 10000");
    mc_check->add_option("--seed", mc.seed, "generator seed, unsigned 64-bit integer");

    unsigned ratio_k = 0;
    unsigned ratio_n_max = 100000;
    auto* ratio = app.add_subcommand("ratio", "fit A_n/B_n against n and adjudicate its constant");
    ratio->add_option("--k", ratio_k, "number of variables, integer >= 1")->required();
    ratio->add_option("--n-max", ratio_n_max, "largest n, integer >= 1000");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*eval)
            return cmd_eval(eval_args, method, format, out);
        if (*bound)
            return cmd_bound(bound_args, false, format, out);
        if (*check)
            return cmd_bound(check_args, true, format, out);
        if (*sweep)
            return cmd_sweep(sweep_args, format == "text" ? "json" : format, out);
        if (*diagonal)
            return cmd_diagonal(diag_k, diag_alpha, diag_x, diag_n, format, out);
        if (*mc_check)
            return cmd_mc_check(mc, format, out);
        if (*ratio)
            return cmd_ratio(ratio_k, ratio_n_max, format, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const verify::ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const MissingTruncationError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::length_error& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace mvlag::cli
