#include <doctest.h>

#include <algorithm>
#include <random>

#include "sqg/config.hpp"
#include "test_support.hpp"

using namespace sqg;

namespace {

ConfigError parse_error(const std::string& text, const ConfigOverrides& overrides = {}) {
    try {
        parse_config(text, overrides);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError");
    return ConfigError({});
}

const std::string kMinimal = "solution = theta1\nkappa = 0.001\nalpha = 0.001\ndt = 0.01\nt_end = 10\ngrid = 64";

}  // namespace

TEST_CASE("minimal config") {
    const ScenarioConfig cfg = parse_config(kMinimal);
    REQUIRE(cfg.cases.size() == 1);
    CHECK(cfg.cases[0].name == "theta1");
    CHECK(cfg.cases[0].is_exact());
    CHECK(cfg.params.kappa == 0.001);
    CHECK(cfg.params.alpha == 0.001);
    CHECK(cfg.params.dt == 0.01);
    CHECK(cfg.params.t_end == 10.0);
    CHECK(cfg.params.dealias);
    CHECK(cfg.grid == GridSpec(64));
    CHECK(cfg.mode == RunMode::Simulate);
    CHECK(cfg.levels == 21);
    CHECK(cfg.checks.automatic);
    CHECK(cfg.output_times() == std::vector<double>{0.0, 10.0});
    // The builtin is rebound to the configured parameters.
    CHECK(kappa_of(std::get<Solution>(cfg.cases[0].initial)) == 0.001);
}

TEST_CASE("sections, comments and lists") {
    const ScenarioConfig cfg = parse_config(R"(# demo
name = demo
solution = theta2, con-1   # two cases
grid = 32x16

[solver]
kappa = 0.01
alpha = 0.4
dt = 0.005
t_end = 2
dealias = off
snapshots = 0.5, 1

[output]
output_dir = out/demo
outputs = csv, report
levels = 9

[checks]
checks = residual, pattern_change
change_threshold = 0.99
)");
    CHECK(cfg.name == "demo");
    REQUIRE(cfg.cases.size() == 2);
    CHECK_FALSE(cfg.cases[1].is_exact());
    CHECK(cfg.grid == GridSpec(32, 16));
    CHECK_FALSE(cfg.params.dealias);
    CHECK(cfg.params.snapshot_times == std::vector<double>{0.5, 1.0});
    CHECK(cfg.output_times() == std::vector<double>{0.0, 0.5, 1.0, 2.0});
    CHECK(cfg.output_dir == "out/demo");
    CHECK(cfg.outputs.csv);
    CHECK_FALSE(cfg.outputs.ppm);
    CHECK(cfg.outputs.report);
    CHECK(cfg.levels == 9);
    CHECK_FALSE(cfg.checks.automatic);
    CHECK(cfg.checks.kinds == std::vector<CheckKind>{CheckKind::Residual, CheckKind::PatternChange});
    CHECK(cfg.checks.change_threshold == 0.99);
}

TEST_CASE("explicit solution sections") {
    const ScenarioConfig cfg = parse_config(R"(kappa = 0.1
alpha = 0.5
t_end = 1
grid = 64
mode = exact
[eigenmode]
name = pair
c1 = 1
c5 = 0.5
n = 3
m = 4
k = 5
[unidirectional]
n = 1
m = -2
modes = 1:1:0, 3:0:0.25
)");
    REQUIRE(cfg.cases.size() == 2);
    const auto& e = std::get<EigenmodeSolution>(std::get<Solution>(cfg.cases[0].initial));
    CHECK(cfg.cases[0].name == "pair");
    CHECK(e.c[0] == 1.0);
    CHECK(e.c[4] == 0.5);
    CHECK(e.kappa == 0.1);
    const auto& u = std::get<UnidirectionalSolution>(std::get<Solution>(cfg.cases[1].initial));
    CHECK(cfg.cases[1].name == "unidirectional");
    CHECK(u.m == -2);
    REQUIRE(u.modes.size() == 2);
    CHECK(u.modes[1].k == 3);
    CHECK(u.modes[1].b == 0.25);
    CHECK(cfg.mode == RunMode::Exact);
}

TEST_CASE("config errors") {
    SUBCASE("empty file lists the required keys") {
        const auto e = parse_error("");
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].kind == ConfigErrorKind::ParseError);
        CHECK(e.issues()[0].message == "missing required keys: solution, kappa, alpha, dt, t_end, grid");
    }
    SUBCASE("alpha outside [0, 1)") {
        const auto e = parse_error("alpha = 1.5");
        CHECK(e.has(ConfigErrorKind::ConstraintViolation));
        const auto it = std::find_if(e.issues().begin(), e.issues().end(), [](const ConfigIssue& i) {
            return i.kind == ConfigErrorKind::ConstraintViolation;
        });
        REQUIRE(it != e.issues().end());
        CHECK(it->line == 1);
        CHECK(it->message == "'alpha': alpha = 1.5 outside [0, 1)");
        CHECK_FALSE(parse_error(kMinimal + "\nalpha = 1.5").has(ConfigErrorKind::ConstraintViolation));
    }
    SUBCASE("line numbers and kinds") {
        const auto e = parse_error(kMinimal + "\nfoo = 1\njunk\n[nowhere]\nkappa = 2\n[solver]\nlevels = 3");
        std::vector<std::pair<int, ConfigErrorKind>> got;
        for (const auto& i : e.issues()) got.push_back({i.line, i.kind});
        CHECK(got == std::vector<std::pair<int, ConfigErrorKind>>{
                         {7, ConfigErrorKind::UnknownKey},
                         {8, ConfigErrorKind::ParseError},
                         {9, ConfigErrorKind::UnknownKey},
                         {12, ConfigErrorKind::UnknownKey},
                     });
        CHECK(std::string(e.what()).find("line 7: UnknownKey") != std::string::npos);
    }
    SUBCASE("duplicate and malformed values") {
        CHECK(parse_error(kMinimal + "\nkappa = 0.1").has(ConfigErrorKind::ParseError));
        CHECK(parse_error("solution = theta1\nkappa = abc\nalpha = 0\ndt = 1\nt_end = 1\ngrid = 8")
                  .has(ConfigErrorKind::ParseError));
        CHECK(parse_error("solution = theta1\nkappa = -1\nalpha = 0\ndt = 1\nt_end = 1\ngrid = 8")
                  .has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error("solution = theta1\nkappa = 1\nalpha = 0\ndt = 1\nt_end = 1\ngrid = 7")
                  .has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error("solution = theta1\nkappa = 1\nalpha = 0\ndt = 2\nt_end = 1\ngrid = 8")
                  .has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(kMinimal + "\nsnapshots = 5, 2").has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(kMinimal + "\nsnapshots = 11").has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(kMinimal + "\nlevels = 1").has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(kMinimal + "\nchecks = residual, bogus").has(ConfigErrorKind::ParseError));
        CHECK(parse_error(kMinimal + "\n[output\n").has(ConfigErrorKind::ParseError));
    }
    SUBCASE("solutions are validated") {
        const std::string head = "kappa = 0.001\nalpha = 0.001\ndt = 0.01\nt_end = 1\ngrid = 64\n";
        const auto broken = parse_error(head + "[eigenmode]\nc1 = 1\nc6 = 1\nn = 1\nm = 1\nk = 1\n");
        REQUIRE(broken.issues().size() == 1);
        CHECK(broken.issues()[0].kind == ConfigErrorKind::ConstraintViolation);
        CHECK(broken.issues()[0].line == 6);
        CHECK(broken.issues()[0].message.find("2 != 1") != std::string::npos);
        CHECK(parse_error(head + "solution = theta9").has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(head + "solution = con-1\nmode = exact").has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(head + "solution = theta1, theta1").has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(head + "mode = exact\nsolution = theta1\nchecks = decay")
                  .has(ConfigErrorKind::ConstraintViolation));
        CHECK(parse_error(head + "[unidirectional]\nn = 1\nm = 1\nmodes = 1:2").has(ConfigErrorKind::ParseError));
        CHECK(parse_error(head + "[eigenmode]\nc9 = 1\n").has(ConfigErrorKind::UnknownKey));
    }
}

TEST_CASE("exact mode does not need dt") {
    const auto cfg = parse_config("solution = theta3\nmode = exact\nkappa = 1\nalpha = 0.5\nt_end = 100\ngrid = 32");
    CHECK(cfg.output_times() == std::vector<double>{0.0, 100.0});
}

TEST_CASE("builtin scenarios") {
    const auto fig = builtin_scenario("figure1");
    REQUIRE(fig);
    CHECK(fig->mode == RunMode::Exact);
    CHECK(fig->cases.size() == 3);
    CHECK(fig->grid == GridSpec(256));
    CHECK(fig->output_times() == std::vector<double>{0.0, 100.0});
    CHECK(fig->levels == 21);

    const auto neg = builtin_scenario("constantin-negative");
    REQUIRE(neg);
    CHECK(neg->mode == RunMode::Simulate);
    CHECK_FALSE(neg->cases.at(0).is_exact());
    CHECK(neg->params.alpha == 0.4);
    CHECK(neg->params.t_end == 5.0);

    CHECK_FALSE(builtin_scenario("nothing"));
    CHECK(builtin_scenario_names().size() == 2);
}

TEST_CASE("solution text round trip") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const Solution sol = trial % 2 ? Solution{sqg::testing::random_eigenmode(rng, 0.37, 0.123)}
                                       : Solution{sqg::testing::random_unidirectional(rng, 1e-3, 0.75)};
        const Solution back = parse_solution(format_solution(sol));
        CHECK(format_solution(back) == format_solution(sol));
        for (double t : {0.0, 2.5}) {
            CHECK(theta_at(back, t, 0.3, 1.7) == theta_at(sol, t, 0.3, 1.7));
        }
    }
    const std::string theta1 = format_solution(std::get<Solution>(builtin_sample("theta1").content));
    CHECK(theta1.find("[eigenmode]\nc1 = 1\n") != std::string::npos);

    CHECK_THROWS_AS(parse_solution("kappa = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_solution("[eigenmode]\nc1 = 1\nc5 = 1\nn = 1\nm = 1\nk = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_solution("[eigenmode]\nc1 = 1\n[eigenmode]\nc1 = 1\n"), ConfigError);
}

TEST_CASE("overrides replace file values") {
    const auto cfg = parse_config(kMinimal + "\n[solver]\nsnapshots = 1, 2\n",
                                  {{"alpha", "0.4"}, {"grid", "32"}, {"snapshots", "5"}, {"checks", "none"}});
    CHECK(cfg.params.alpha == 0.4);
    CHECK(cfg.grid == GridSpec(32));
    CHECK(cfg.params.snapshot_times == std::vector<double>{5.0});
    CHECK_FALSE(cfg.checks.automatic);
    CHECK(cfg.checks.kinds.empty());

    // Overrides can complete an otherwise partial file.
    CHECK_NOTHROW(parse_config("solution = theta1\n", {{"kappa", "1"}, {"alpha", "0"}, {"dt", "0.1"},
                                                      {"t_end", "1"}, {"grid", "16"}}));

    const auto bad = parse_error(kMinimal, {{"alpha", "2"}, {"colour", "red"}});
    std::vector<std::pair<int, ConfigErrorKind>> got;
    for (const auto& i : bad.issues()) got.push_back({i.line, i.kind});
    CHECK(got == std::vector<std::pair<int, ConfigErrorKind>>{{0, ConfigErrorKind::UnknownKey},
                                                              {0, ConfigErrorKind::ConstraintViolation}});

    const auto fig = builtin_scenario("figure1", {{"grid", "64"}, {"output_dir", "elsewhere"}});
    CHECK(fig->grid == GridSpec(64));
    CHECK(fig->output_dir == "elsewhere");
}
