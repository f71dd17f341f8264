// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "sqg/config.hpp"
#include "sqg/errors.hpp"
#include "sqg/exact_solutions.hpp"
#include "sqg/field_io.hpp"
#include "sqg/integrator.hpp"
#include "sqg/scenario.hpp"
#include "sqg/spectral.hpp"
#include "sqg/verification.hpp"
#include "test_support.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double time_limit, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit > 0.0 && secs >= time_limit) {
        out.pass = false;
        char buf[96];
        std::snprintf(buf, sizeof buf, "; runtime %.2f s exceeds %.0f s", secs, time_limit);
        out.detail += buf;
    }
    std::printf("%s [%d] %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Solution builtin(const char* name, double kappa, double alpha) {
    return with_params(std::get<Solution>(builtin_sample(name).content), kappa, alpha);
}

// The sweep population: the three builtins and 50 random valid solutions.
std::vector<Solution> population() {
    std::vector<Solution> sols{builtin("theta1", 1e-3, 1e-3), builtin("theta2", 1e-3, 1e-3),
                               builtin("theta3", 1e-3, 1e-3)};
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 25; ++i) sols.emplace_back(sqg::testing::random_eigenmode(rng, 1e-3, 1e-3));
    for (int i = 0; i < 25; ++i) sols.emplace_back(sqg::testing::random_unidirectional(rng, 1e-3, 1e-3));
    for (const auto& s : sols) require_valid(s);
    return sols;
}

constexpr double kAlphas[] = {0.0, 0.001, 0.25, 0.49, 0.75};
constexpr double kKappas[] = {0.001, 1.0};
constexpr double kTimes[] = {0.0, 1.0, 10.0};

double relative_l2(const PhysicalField& a, const PhysicalField& b) {
    PhysicalField d = a;
    for (std::size_t i = 0; i < d.values().size(); ++i) d.values()[i] -= b.values()[i];
    return l2_norm(d) / l2_norm(b);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(SQG_TEST_TMPDIR) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

int main() {
    const GridSpec g64(64);

    criterion(1, "closed-form solutions satisfy the PDE", 30.0, [&] {
        double worst = 0.0;
        int cases = 0;
        for (const Solution& base : population()) {
            for (double alpha : kAlphas) {
                for (double kappa : kKappas) {
                    const Solution sol = with_params(base, kappa, alpha);
                    for (double t : kTimes) {
                        worst = std::max(worst, residual(sol, t, g64).l_inf);
                        ++cases;
                    }
                }
            }
        }
        return Outcome{worst < 1e-10 && cases == 53 * 30,
                       fmt("max residual L-inf %.3g < 1e-10 over %.0f cases on 64x64", worst, cases)};
    });

    criterion(2, "nonlinear cancellation and broken-constraint control", 0.0, [&] {
        double worst = 0.0;
        for (const Solution& base : population()) {
            for (double alpha : kAlphas) {
                for (double kappa : kKappas) {
                    for (double t : kTimes) {
                        worst = std::max(worst, residual(with_params(base, kappa, alpha), t, g64).nonlinear_linf);
                    }
                }
            }
        }
        EigenmodeSolution control;  // sin x sin y + cos y
        control.c = {1, 0, 0, 0, 0, 0, 0, 1};
        control.n = control.m = control.k = 1;
        const double oracle = 1.0 - 1.0 / std::sqrt(2.0);
        const double got = residual_unchecked(Solution{control}, 0.0, g64).nonlinear_linf;
        const bool rejected = !validate(control).ok();
        return Outcome{worst < 1e-11 && std::abs(got - oracle) < 1e-6 && rejected,
                       fmt("valid max |u.grad theta| %.3g < 1e-11; control %.8f vs 1 - 1/sqrt(2) = %.8f", worst,
                           got, oracle)};
    });

    criterion(3, "decay-rate recovery for theta1", 10.0, [&] {
        SolverParams p;
        p.kappa = p.alpha = 1e-3;
        p.dt = 0.01;
        p.t_end = 10.0;
        p.snapshot_times = {2.0, 4.0, 6.0, 8.0};
        const Solution sol = builtin("theta1", 1e-3, 1e-3);
        const Trajectory traj = simulate(eval_theta(sol, 0.0, g64), p);
        const DecayFit fit = decay_rate_fit(traj, 5.0, 1e-3, 1e-3);
        const double oracle = 0.001 * std::pow(5.0, 0.001);
        const double rel = std::abs(fit.fitted_rate - oracle) / oracle;
        return Outcome{rel < 1e-6, fmt("fitted %.10g vs 0.001*5^0.001 = %.10g, relative error %.2g", fit.fitted_rate,
                                       oracle, rel)};
    });

    criterion(4, "solver fidelity and fourth-order convergence", 0.0, [&] {
        double worst = 0.0;
        for (const char* name : {"theta1", "theta2", "theta3"}) {
            SolverParams p;
            p.kappa = p.alpha = 1e-3;
            p.dt = 0.01;
            p.t_end = 10.0;
            const Solution sol = builtin(name, p.kappa, p.alpha);
            const auto traj = simulate(eval_theta(sol, 0.0, g64), p);
            worst = std::max(worst, relative_l2(traj.snapshots.back().field, eval_theta(sol, 10.0, g64)));
        }

        // Error against a dt/8 reference for a strongly nonlinear datum.
        const GridSpec g16(16);
        const PhysicalField init = PhysicalField::sample(g16, [](double x, double y) {
            return 0.2 + std::sin(x) * std::sin(y) + std::cos(y) + 0.3 * std::cos(2 * x - y);
        });
        auto run = [&](double dt) {
            SolverParams p;
            p.kappa = 0.01;
            p.alpha = 0.4;
            p.dt = dt;
            p.t_end = 5.0;
            return simulate(init, p).snapshots.back().field;
        };
        const PhysicalField reference = run(0.000625);
        const double dts[] = {0.04, 0.02, 0.01, 0.005};
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (double dt : dts) {
            const double x = std::log(dt), y = std::log(relative_l2(run(dt), reference));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
        return Outcome{worst < 1e-8 && slope >= 3.8,
                       fmt("max relative L2 error at t=10 %.3g < 1e-8; convergence slope %.4f >= 3.8", worst, slope)};
    });

    criterion(5, "quasi-stationary patterns and reproducible figure artifacts", 0.0, [&] {
        const GridSpec g256(256);
        double corr_dev = 0.0, uni = 0.0;
        for (const char* name : {"theta1", "theta2"}) {
            const Solution sol = builtin(name, 1e-3, 1e-3);
            const PhysicalField f0 = eval_theta(sol, 0.0, g256);
            for (double t : {1.0, 10.0, 100.0}) {
                corr_dev = std::max(corr_dev, std::abs(pattern_correlation(eval_theta(sol, t, g256), f0) - 1.0));
            }
        }
        const Solution theta3 = builtin("theta3", 1e-3, 1e-3);
        for (double t : {1.0, 10.0, 100.0}) {
            uni = std::max(uni, unidirectionality_check(eval_theta(theta3, t, g256), 1, 1));
        }

        auto cfg = *builtin_scenario("figure1");
        cfg.output_dir = scratch("figure1_a");
        const auto a = run_scenario(cfg);
        cfg.output_dir = scratch("figure1_b");
        const auto b = run_scenario(cfg);
        int images = 0, identical = 0;
        for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
            if (entry.path().extension() != ".ppm") continue;
            ++images;
            const auto other = fs::path(SQG_TEST_TMPDIR) / "figure1_a" / entry.path().filename();
            identical += slurp(entry.path()) == slurp(other) ? 1 : 0;
        }
        const bool ok = corr_dev <= 1e-10 && uni < 1e-12 && a.exit_code == 0 && b.exit_code == 0 && images == 6 &&
                        identical == 6;
        return Outcome{ok, fmt("|corr - 1| %.3g <= 1e-10; theta3 off-ray energy %.3g < 1e-12; ", corr_dev, uni) +
                               std::to_string(identical) + "/6 images byte-identical"};
    });

    criterion(6, "non-exact datum changes its pattern", 0.0, [&] {
        auto cfg = *builtin_scenario("constantin-negative");
        cfg.output_dir = scratch("constantin-negative");
        const auto res = run_scenario(cfg);
        double corr = std::nan("");
        for (const auto& c : res.checks) {
            if (c.name == "con-1/pattern_change") corr = c.value;
        }
        const auto& datum = std::get<InitialDatum>(builtin_sample("con-1").content);
        const ValidationReport report = validate(*datum.as_eigenmode);
        const bool rejected = !report.ok() && report.summary().find("2 != 1") != std::string::npos;
        return Outcome{res.exit_code == 0 && corr < 0.999 && rejected,
                       fmt("correlation at t=5 is %.6f < 0.999 (alpha 0.4, kappa 0.001, %.0fx%.0f); ", corr,
                           cfg.grid.nx(), cfg.grid.ny()) +
                           (rejected ? "validation rejects it (2 != 1)" : "validation did not reject it")};
    });

    criterion(7, "transform, CSV and divergence infrastructure", 0.0, [&] {
        std::mt19937_64 rng(7);
        const GridSpec g32(32);
        double round_trip = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = sqg::testing::random_field(g32, rng);
            round_trip = std::max(round_trip, sqg::testing::max_abs_diff(inverse_transform(forward_transform(f)), f));
        }

        const fs::path dir = scratch("csv");
        bool csv_exact = true;
        for (const PhysicalField& f : {eval_theta(builtin("theta1", 1e-3, 1e-3), 0.0, g64),
                                       sqg::testing::random_field(GridSpec(32, 16), rng)}) {
            write_field_csv(f, dir / "f.csv");
            const auto back = read_field_csv(dir / "f.csv");
            csv_exact = csv_exact && back.grid() == f.grid() &&
                        std::memcmp(back.values().data(), f.values().data(), f.values().size() * sizeof(double)) == 0;
        }

        double div = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto s = forward_transform(sqg::testing::random_field(trial % 2 ? g32 : g64, rng));
            const auto [u, v] = velocity_from_theta(s);
            const SpectralField d = divergence(u, v);
            for (Complex c : d.coefficients()) div = std::max(div, std::abs(c));
        }
        return Outcome{round_trip < 1e-12 && csv_exact && div == 0.0,
                       fmt("round trip %.3g < 1e-12; divergence max %.3g (must be 0); CSV ", round_trip, div) +
                           (csv_exact ? "bit-exact" : "NOT exact")};
    });

    std::printf("%s: %d of 7 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
