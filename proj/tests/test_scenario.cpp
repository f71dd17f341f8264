#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "sqg/field_io.hpp"
#include "sqg/scenario.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path(SQG_TEST_TMPDIR) / "scenario" / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> listing(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

ScenarioConfig config(const std::string& text, const fs::path& dir) {
    ScenarioConfig cfg = parse_config(text);
    cfg.output_dir = dir;
    return cfg;
}

}  // namespace

TEST_CASE("time tags") {
    CHECK(time_tag(0.0) == "t0");
    CHECK(time_tag(100.0) == "t100");
    CHECK(time_tag(0.25) == "t0.25");
}

TEST_CASE("t_end = 0 writes only t = 0 artifacts") {
    const auto dir = fresh_dir("t0");
    const auto res = run_scenario(config(
        "solution = theta1\nkappa = 0.001\nalpha = 0.001\ndt = 0.01\nt_end = 0\ngrid = 32", dir));
    CHECK(res.exit_code == exit_code::ok);
    CHECK(res.message.empty());
    CHECK(listing(dir) == std::vector<std::string>{"report.csv", "summary.json", "theta1_t0.csv", "theta1_t0.ppm"});
    for (const auto& c : res.checks) CHECK(c.t == 0.0);
}

TEST_CASE("simulated exact solution passes its checks") {
    const auto dir = fresh_dir("theta1_sim");
    const auto res = run_scenario(config(
        "solution = theta1\nkappa = 0.001\nalpha = 0.001\ndt = 0.01\nt_end = 4\nsnapshots = 1, 2\ngrid = 32", dir));
    CHECK(res.exit_code == exit_code::ok);
    std::set<std::string> kinds;
    for (const auto& c : res.checks) {
        kinds.insert(c.name);
        CHECK_MESSAGE(c.pass, c.name, " at t = ", c.t, ": ", c.value);
    }
    CHECK(kinds == std::set<std::string>{"theta1/correlation", "theta1/decay", "theta1/residual",
                                         "theta1/solver_error"});

    const auto report = slurp(dir / "report.csv");
    CHECK(report.rfind(report_csv_header() + "\n", 0) == 0);
    CHECK(std::count(report.begin(), report.end(), '\n') == static_cast<long>(res.checks.size()) + 1);

    const auto final_field = read_field_record(dir / "theta1_t4.csv");
    CHECK(final_field.t == 4.0);
    CHECK(final_field.field.grid() == GridSpec(32));
}

TEST_CASE("exact-mode theta3 runs the unidirectionality check") {
    const auto dir = fresh_dir("theta3");
    const auto res = run_scenario(config(
        "solution = theta3\nmode = exact\nkappa = 0.5\nalpha = 0.5\nt_end = 10\nsnapshots = 1\ngrid = 32\n"
        "outputs = report\n",
        dir));
    CHECK(res.exit_code == exit_code::ok);
    int uni = 0;
    for (const auto& c : res.checks) uni += c.name == "theta3/unidirectional";
    CHECK(uni == 3);
    CHECK(listing(dir) == std::vector<std::string>{"report.csv", "summary.json"});
}

TEST_CASE("a failing check gives exit status 1 and a machine-readable summary") {
    const auto dir = fresh_dir("failing");
    const auto res = run_scenario(config(
        "solution = con-1\nkappa = 0.001\nalpha = 0.4\ndt = 0.01\nt_end = 0.05\ngrid = 32\n", dir));
    CHECK(res.exit_code == exit_code::verification_failure);
    REQUIRE(res.checks.size() == 1);
    CHECK(res.checks[0].name == "con-1/pattern_change");
    CHECK_FALSE(res.checks[0].pass);

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["status"] == "verification_failure");
    CHECK(summary["exit_code"] == 1);
    CHECK(summary["failed_checks"].size() == 1);
    CHECK(summary["failed_checks"][0]["check"] == "con-1/pattern_change");
}

TEST_CASE("runtime failures give exit status 3") {
    const auto dir = fresh_dir("cfl");
    const auto res = run_scenario(config(
        "solution = con-1\nkappa = 0.001\nalpha = 0.4\ndt = 0.5\nt_end = 1\ngrid = 64\n", dir));
    CHECK(res.exit_code == exit_code::runtime_error);
    CHECK(res.message.find("stability limit") != std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["status"] == "runtime_error");
}

TEST_CASE("explicitly requested checks replace the automatic set") {
    const auto dir = fresh_dir("explicit");
    const auto res = run_scenario(config(
        "solution = theta2, con-1\nkappa = 0.01\nalpha = 0.4\ndt = 0.01\nt_end = 0.5\ngrid = 64\n"
        "checks = pattern_change\nchange_threshold = 0.9999\noutputs = report\n",
        dir));
    // theta2 keeps its pattern (fails); con-1 moves (passes).
    REQUIRE(res.checks.size() == 2);
    CHECK(res.checks[0].name == "theta2/pattern_change");
    CHECK_FALSE(res.checks[0].pass);
    CHECK(res.checks[1].pass);
    CHECK(res.exit_code == exit_code::verification_failure);
}

TEST_CASE("figure1 scenario regenerates byte-identically") {
    auto cfg = *builtin_scenario("figure1");
    const fs::path first = fresh_dir("figure1_a");
    cfg.output_dir = first;
    const auto a = run_scenario(cfg);
    CHECK(a.exit_code == exit_code::ok);
    cfg.output_dir = fresh_dir("figure1_b");
    const auto b = run_scenario(cfg);
    CHECK(b.exit_code == exit_code::ok);

    std::vector<std::string> ppm;
    for (const auto& name : listing(cfg.output_dir)) {
        if (name.size() > 4 && name.substr(name.size() - 4) == ".ppm") ppm.push_back(name);
    }
    CHECK(ppm == std::vector<std::string>{"theta1_t0.ppm", "theta1_t100.ppm", "theta2_t0.ppm", "theta2_t100.ppm",
                                          "theta3_t0.ppm", "theta3_t100.ppm"});
    for (const auto& name : listing(cfg.output_dir)) {
        CHECK_MESSAGE(slurp(first / name) == slurp(cfg.output_dir / name), name);
    }
    std::set<std::string> kinds;
    for (const auto& c : a.checks) kinds.insert(c.name);
    CHECK(kinds.count("theta1/correlation"));
    CHECK(kinds.count("theta2/correlation"));
    CHECK(kinds.count("theta3/unidirectional"));
    CHECK_FALSE(kinds.count("theta3/correlation"));
}
