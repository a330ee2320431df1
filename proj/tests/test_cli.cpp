#include <doctest.h>

#include "mvlag/cli.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mvlag::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string field(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + ": ", 0) == 0)
            return line.substr(key.size() + 2);
    return {};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << contents;
    return path;
}

const std::string kConfig =
    R"({"k":2,"index_cap":2,"alpha_set":["1/2",1],"x_grid":{"mode":"grid","start":0,"stop":4,"step":"1/2"},)"
    R"("bounds":["theorem1","theorem2"],"comparison_policy":"float_guarded"})";

}  // namespace

// ---------------------------------------------------------------- oracles

TEST_CASE("oracle: eval") {
    Run r = run({"eval", "--k", "2", "--n", "1,1", "--alpha", "1", "--x", "2,2"});
    CHECK(r.code == kOk);
    CHECK(r.out == "-2\n");
    CHECK(r.err.empty());
    CHECK(run({"eval", "--k", "1", "--n", "0", "--alpha", "0", "--x", "5"}).out == "1\n");
    r = run({"eval", "--k", "2", "--n", "1,1", "--alpha", "1", "--x", "2,2", "--method", "both"});
    CHECK(r.code == kOk);
    CHECK(r.out == "explicit: -2\ngf: -2\nAGREE\n");
    // decimals are exact base-10 rationals
    CHECK(run({"eval", "--k", "1", "--n", "1", "--alpha", "0.1", "--x", "0"}).out == "11/10\n");
}

TEST_CASE("oracle: bound and check") {
    Run r = run({"bound", "--theorem", "1", "--k", "2", "--n", "1,1", "--alpha", "1", "--x", "0,0"});
    CHECK(r.code == kOk);
    CHECK(field(r.out, "coefficient") == "48");
    CHECK(field(r.out, "tightness") == "0.125");

    r = run({"check", "--theorem", "1", "--k", "1", "--n", "5", "--alpha", "0", "--x", "10"});
    CHECK(r.code == kOk);
    CHECK(field(r.out, "verdict") == "PASS");
    CHECK(field(r.out, "bound_source") == "szego");

    r = run({"check", "--theorem", "2", "--k", "2", "--n", "1,1", "--alpha", "-0.75", "--x", "1,1"});
    CHECK(r.code == kOk);
    CHECK(field(r.out, "verdict").find("EXTENDED-DOMAIN") != std::string::npos);

    r = run({"--format", "json", "check", "--source", "rooney2", "--k", "1", "--n", "3", "--alpha", "-1", "--x", "2"});
    CHECK(r.code == kOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["bound_source"] == "rooney2");
    CHECK(j["verdict"] == "PASS");
}

TEST_CASE("oracle: diagonal, ratio, mc-check") {
    CHECK(run({"diagonal", "--k", "2", "--alpha", "0", "--x", "1,1", "--N", "1"}).out == "1, -1\n");

    Run r = run({"ratio", "--k", "2", "--n-max", "100000"});
    CHECK(r.code == kOk);
    CHECK(std::fabs(std::stod(field(r.out, "slope"))) <= 0.01);
    CHECK(std::stod(field(r.out, "fitted_constant")) == doctest::Approx(0.599).epsilon(2e-3));
    CHECK(field(r.out, "verdict") == "DERIVED");

    r = run({"mc-check", "--k", "1", "--n", "1", "--alphas", "0", "--beta", "0", "--x", "1", "--samples", "100000",
             "--seed", "7"});
    CHECK(r.code == kOk);
    CHECK(field(r.out, "lhs") == "1");
    CHECK(field(r.out, "verdict") == "WITHIN_3SE");
}

TEST_CASE("oracle: sweep") {
    const auto config = temp_file("mvlag_cli_config.json", kConfig);
    const auto records = std::filesystem::temp_directory_path() / "mvlag_cli_records.csv";
    Run r = run({"sweep", "--config", config.string(), "--records", records.string(), "--threads", "2"});
    CHECK(r.code == kOk);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary["violations"] == 0);
    CHECK(summary["records"] == 9 * 2 * 81);
    std::ifstream in(records);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,n_vec,alpha,x_vec,value,bound_source,bound,tightness,verdict");

    Run again = run({"--format", "json", "sweep", "--config", config.string(), "--threads", "1"});
    CHECK(again.out == r.out);
}

// ---------------------------------------------------------------- exit codes

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == kUsage);
    CHECK(run({"frobnicate"}).code == kUsage);
    CHECK(run({"eval", "--k", "2", "--n", "1", "--alpha", "1", "--x", "1,1"}).code == kUsage);
    CHECK(run({"eval", "--k", "1", "--n", "1", "--alpha", "one", "--x", "1"}).code == kUsage);
    CHECK(run({"eval", "--k", "1", "--n", "-1", "--alpha", "1", "--x", "1"}).code == kUsage);
    CHECK(run({"--format", "yaml", "eval", "--k", "1", "--n", "1", "--alpha", "1", "--x", "1"}).code == kUsage);
    CHECK(run({"bound", "--k", "1", "--n", "1", "--alpha", "1", "--x", "1"}).code == kUsage);
    const auto bad = temp_file("mvlag_cli_bad.json", R"({"k":2})");
    const Run r = run({"sweep", "--config", bad.string()});
    CHECK(r.code == kUsage);
    CHECK_FALSE(r.err.empty());
    CHECK(r.out.empty());
}

TEST_CASE("domain errors exit 3") {
    CHECK(run({"eval", "--k", "1", "--n", "3", "--alpha", "-2", "--x", "1", "--method", "explicit"}).code == kDomain);
    CHECK(run({"bound", "--theorem", "1", "--k", "2", "--n", "1,1", "--alpha", "-1/2", "--x", "1,1"}).code == kDomain);
    CHECK(run({"bound", "--source", "szego", "--k", "1", "--n", "1", "--alpha", "-1/2", "--x", "1"}).code == kDomain);
    CHECK(run({"diagonal", "--k", "3", "--alpha", "1", "--x", "1,1,1", "--N", "81"}).code == kDomain);
    CHECK(run({"ratio", "--k", "2", "--n-max", "10"}).code == kDomain);
}

TEST_CASE("I/O errors exit 4") {
    CHECK(run({"sweep", "--config", "/nonexistent-dir/config.json"}).code == kIo);
    const auto config = temp_file("mvlag_cli_config_io.json", kConfig);
    CHECK(run({"sweep", "--config", config.string(), "--summary", "/nonexistent-dir/s.json"}).code == kIo);
}

TEST_CASE("extended-domain violations are reported with exit 0") {
    // extended-domain theorem2 counterexample found by sweeping alpha = -99/100
    Run r = run({"check", "--theorem", "2", "--k", "2", "--n", "0,6", "--alpha", "-99/100", "--x", "0,39/2"});
    CHECK(r.code == kOk);  // extended range is reported, not asserted
    CHECK(field(r.out, "verdict") == "VIOLATION EXTENDED-DOMAIN");
}

TEST_CASE("help lists every flag") {
    Run r = run({"sweep", "--help"});
    CHECK(r.code == kOk);
    for (const char* flag : {"--config", "--records", "--summary", "--threads"})
        CHECK(r.out.find(flag) != std::string::npos);
    r = run({"mc-check", "--help"});
    for (const char* flag : {"--k", "--n", "--x", "--alphas", "--beta", "--theorem", "--alpha", "--samples", "--seed"})
        CHECK(r.out.find(flag) != std::string::npos);
}
