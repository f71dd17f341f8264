// sqg: command-line front end for the spectral toolkit.
//
//   sqg eval      closed-form field of a builtin or explicit solution -> CSV/PPM
//   sqg simulate  evolve a solution, datum or CSV field; write snapshots
//   sqg verify    validation report and PDE residuals of a solution
//   sqg render    CSV field -> PPM contour image
//   sqg scenario  config-driven runs with verification reports
//
// Exit status: 0 success, 1 verification failure, 2 usage/config error,
// 3 runtime error.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "sqg/config.hpp"
#include "sqg/errors.hpp"
#include "sqg/exact_solutions.hpp"
#include "sqg/field_io.hpp"
#include "sqg/integrator.hpp"
#include "sqg/scenario.hpp"
#include "sqg/spectral.hpp"
#include "sqg/verification.hpp"

namespace fs = std::filesystem;
using namespace sqg;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string real_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Flags shared with the config format; each set flag becomes an override.
struct ConfigFlags {
    std::optional<std::string> solution, mode, grid, snapshots, output_dir, outputs, checks;
    std::optional<double> kappa, alpha, dt, t_end;
    std::optional<int> levels;
    bool no_dealias = false;

    void attach(CLI::App* app, bool with_mode) {
        app->add_option("--solution", solution, "Builtin solution name(s), comma-separated");
        if (with_mode) app->add_option("--mode", mode, "exact or simulate");
        app->add_option("--kappa", kappa, "Dissipation coefficient");
        app->add_option("--alpha", alpha, "Dissipation exponent in [0, 1)");
        app->add_option("--dt", dt, "Time step");
        app->add_option("--t-end", t_end, "Final time");
        app->add_option("--grid", grid, "Grid size N or NxM");
        app->add_option("--snapshots", snapshots, "Output times, comma-separated");
        app->add_option("--output-dir", output_dir, "Output directory");
        app->add_option("--outputs", outputs, "Artifact kinds: csv, ppm, report");
        app->add_option("--levels", levels, "Contour bands in PPM images");
        app->add_option("--checks", checks, "auto, none, or a list of checks");
        app->add_flag("--no-dealias", no_dealias, "Disable the 2/3-rule filter");
    }

    ConfigOverrides overrides() const {
        ConfigOverrides o;
        auto put = [&](const char* key, const auto& v) {
            if (!v) return;
            if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, std::string>) o.emplace_back(key, *v);
            else if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, int>) o.emplace_back(key, std::to_string(*v));
            else o.emplace_back(key, real_text(*v));
        };
        put("solution", solution);
        put("mode", mode);
        put("kappa", kappa);
        put("alpha", alpha);
        put("dt", dt);
        put("t_end", t_end);
        put("grid", grid);
        put("snapshots", snapshots);
        put("output_dir", output_dir);
        put("outputs", outputs);
        put("levels", levels);
        put("checks", checks);
        if (no_dealias) o.emplace_back("dealias", "off");
        return o;
    }
};

// A single solution chosen by name or from a solution text file.
struct SolutionFlags {
    std::string name;
    std::string file;
    std::optional<double> kappa, alpha;

    void attach(CLI::App* app) {
        auto* group = app->add_option_group("solution");
        group->add_option("--solution", name, "Builtin sample name");
        group->add_option("--solution-file", file, "Solution in the config text format");
        group->require_option(1);
        app->add_option("--kappa", kappa, "Override the solution's kappa");
        app->add_option("--alpha", alpha, "Override the solution's alpha");
    }

    void check_params() const {
        if (kappa && !(*kappa > 0.0)) throw UsageError("--kappa must be > 0");
        if (alpha && !(*alpha >= 0.0 && *alpha < 1.0)) throw UsageError("--alpha must lie in [0, 1)");
    }

    std::variant<Solution, InitialDatum> resolve() const {
        check_params();
        std::variant<Solution, InitialDatum> content;
        if (!file.empty()) {
            content = parse_solution(read_text(file));
        } else {
            try {
                content = builtin_sample(name).content;
            } catch (const std::out_of_range&) {
                throw UsageError("unknown solution '" + name + "'");
            }
        }
        if (auto* sol = std::get_if<Solution>(&content)) {
            *sol = with_params(*sol, kappa.value_or(kappa_of(*sol)), alpha.value_or(alpha_of(*sol)));
        }
        return content;
    }
};

GridSpec parse_grid(const std::string& text) {
    int nx = 0, ny = 0;
    char tail = 0;
    const int got = std::sscanf(text.c_str(), "%dx%d%c", &nx, &ny, &tail);
    if (got == 1 && text.find('x') == std::string::npos) ny = nx;
    if (!(got == 2 || (got == 1 && ny == nx))) throw UsageError("--grid expects N or NxM");
    return GridSpec(nx, ny);
}

std::vector<double> parse_times(const std::string& text) {
    std::vector<double> times;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" ", used) != std::string::npos) {
            throw UsageError("bad time value '" + item + "'");
        }
        times.push_back(v);
    }
    if (times.empty()) throw UsageError("no times given");
    return times;
}

int cmd_eval(const SolutionFlags& sf, double t, const std::string& grid_text, const std::string& out,
             const std::string& ppm, int levels) {
    const GridSpec grid = parse_grid(grid_text);
    const auto content = sf.resolve();
    PhysicalField f(grid);
    if (const auto* sol = std::get_if<Solution>(&content)) {
        const ValidationReport report = validate(*sol);
        if (!report.ok()) {
            std::cerr << "not an exact solution: " << report.summary() << "\n";
            return exit_code::verification_failure;
        }
        f = eval_theta(*sol, t, grid);
    } else {
        if (t != 0.0) throw UsageError("'" + sf.name + "' is an initial datum; only --t 0 can be evaluated");
        f = std::get<InitialDatum>(content).sample(grid);
    }
    if (!out.empty()) write_field_csv(f, out, t);
    if (!ppm.empty()) render_contour(f, ppm, levels);
    std::printf("t=%.17g l2=%.17g linf=%.17g mean=%.17g\n", t, l2_norm(f), linf_norm(f), mean(f));
    return exit_code::ok;
}

int cmd_verify(const SolutionFlags& sf, const std::string& grid_text, const std::string& times_text, double tol) {
    const GridSpec grid = parse_grid(grid_text);
    const auto content = sf.resolve();
    const Solution* sol = std::get_if<Solution>(&content);
    if (!sol && !std::get<InitialDatum>(content).as_eigenmode) {
        throw UsageError("'" + sf.name + "' has no eigenmode form to verify");
    }
    const ValidationReport report =
        sol ? validate(*sol) : validate(*std::get<InitialDatum>(content).as_eigenmode);
    std::printf("validation: %s\n", report.ok() ? "ok" : "INVALID");
    for (const auto& v : report.violations) std::printf("  violation: %s\n", v.c_str());
    for (const auto& n : report.notes) std::printf("  note: %s\n", n.c_str());

    const Solution candidate = sol ? *sol : Solution{*std::get<InitialDatum>(content).as_eigenmode};
    bool pass = report.ok();
    std::printf("%-10s %-24s %-24s %-24s\n", "t", "residual_linf", "residual_l2", "advection_linf");
    for (double t : parse_times(times_text)) {
        const ResidualReport r = report.ok() ? residual(candidate, t, grid) : residual_unchecked(candidate, t, grid);
        std::printf("%-10g %-24.17g %-24.17g %-24.17g\n", t, r.l_inf, r.l2, r.nonlinear_linf);
        pass = pass && r.l_inf < tol;
    }
    std::printf("%s\n", pass ? "PASS" : "FAIL");
    return pass ? exit_code::ok : exit_code::verification_failure;
}

// Solver settings from the flags alone, for an initial field read from CSV.
SolverParams params_from_flags(const ConfigFlags& f) {
    if (!f.kappa || !f.alpha || !f.dt || !f.t_end) throw UsageError("--in needs --kappa, --alpha, --dt and --t-end");
    SolverParams p;
    p.kappa = *f.kappa;
    p.alpha = *f.alpha;
    p.dt = *f.dt;
    p.t_end = *f.t_end;
    p.dealias = !f.no_dealias;
    if (f.snapshots) p.snapshot_times = parse_times(*f.snapshots);
    p.validate();
    return p;
}

int cmd_simulate(const std::string& config_path, const std::string& input_csv, const ConfigFlags& flags) {
    std::string name;
    PhysicalField initial(GridSpec(4));
    ScenarioConfig cfg;
    if (!input_csv.empty()) {
        if (!config_path.empty()) throw UsageError("--in and --config are exclusive");
        if (flags.solution || flags.grid) throw UsageError("--in supplies the field; drop --solution and --grid");
        cfg.params = params_from_flags(flags);
        if (flags.output_dir) cfg.output_dir = *flags.output_dir;
        if (flags.levels) cfg.levels = *flags.levels;
        initial = read_field_csv(input_csv);
        name = fs::path(input_csv).stem().string();
    } else {
        ConfigOverrides o = flags.overrides();
        o.emplace_back("mode", "simulate");
        cfg = config_path.empty() ? parse_config("", o) : load_config(config_path, o);
        if (cfg.cases.size() != 1) throw UsageError("simulate takes exactly one solution");
        const auto& c = cfg.cases[0];
        name = c.name;
        initial = c.is_exact() ? eval_theta(std::get<Solution>(c.initial), 0.0, cfg.grid)
                               : std::get<InitialDatum>(c.initial).sample(cfg.grid);
    }
    if (flags.outputs) {
        const std::string& kinds = *flags.outputs;
        cfg.outputs.csv = kinds.find("csv") != std::string::npos;
        cfg.outputs.ppm = kinds.find("ppm") != std::string::npos || kinds.find("pgm") != std::string::npos;
    }

    SolverParams p = cfg.params;
    p.snapshot_times = cfg.output_times();
    std::fprintf(stderr, "stability limit dt <= %.6g\n", cfl_time_step(forward_transform(initial), p.dealias));
    const Trajectory traj = simulate(initial, p);

    fs::create_directories(cfg.output_dir);
    std::printf("%-10s %-24s %-24s %-24s\n", "t", "l2", "linf", "mean");
    for (const auto& s : traj.snapshots) {
        const std::string stem = name + "_" + time_tag(s.t);
        if (cfg.outputs.csv) write_field_csv(s.field, cfg.output_dir / (stem + ".csv"), s.t);
        if (cfg.outputs.ppm) render_contour(s.field, cfg.output_dir / (stem + ".ppm"), cfg.levels);
        std::printf("%-10g %-24.17g %-24.17g %-24.17g\n", s.t, s.l2, s.linf, s.mean);
    }
    if (traj.snapshots.size() > 1) {
        std::printf("pattern_correlation(t_end, 0) = %.17g\n",
                    pattern_correlation(traj.snapshots.back().field, traj.snapshots.front().field));
    }
    return exit_code::ok;
}

int cmd_render(const std::string& in, const std::string& out, int levels) {
    render_contour(read_field_csv(in), out, levels);
    return exit_code::ok;
}

int cmd_scenario(const std::vector<std::string>& configs, const std::vector<std::string>& builtins,
                 const ConfigFlags& flags, int jobs) {
    if (configs.empty() && builtins.empty()) throw UsageError("give --config and/or --builtin");
    const std::size_t count = configs.size() + builtins.size();
    ConfigOverrides o = flags.overrides();
    // With several scenarios, --output-dir is the parent of per-scenario directories.
    std::optional<fs::path> parent;
    if (count > 1 && flags.output_dir) {
        parent = *flags.output_dir;
        o.erase(std::remove_if(o.begin(), o.end(), [](const auto& kv) { return kv.first == "output_dir"; }), o.end());
    }

    std::vector<ScenarioConfig> scenarios;
    for (const auto& path : configs) scenarios.push_back(load_config(path, o));
    for (const auto& name : builtins) {
        auto cfg = builtin_scenario(name, o);
        if (!cfg) throw UsageError("unknown builtin scenario '" + name + "'");
        scenarios.push_back(std::move(*cfg));
    }
    std::set<fs::path> dirs;
    for (auto& s : scenarios) {
        if (parent) s.output_dir = *parent / s.output_dir.filename();
        if (!dirs.insert(fs::weakly_canonical(s.output_dir)).second) {
            throw UsageError("scenarios share the output directory " + s.output_dir.string());
        }
    }

    std::vector<ScenarioResult> results(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) results[i] = run_scenario(scenarios[i]);
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(scenarios.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int status = exit_code::ok;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& r = results[i];
        const auto failed = std::count_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return !c.pass; });
        std::printf("%s: %s (%zu checks, %td failed) -> %s\n", scenarios[i].name.c_str(),
                    r.exit_code == exit_code::ok ? "PASS" : "FAIL", r.checks.size(), failed,
                    scenarios[i].output_dir.string().c_str());
        for (const auto& c : r.checks) {
            if (!c.pass) std::printf("  failed %s\n", to_csv_row(c).c_str());
        }
        if (!r.message.empty()) std::printf("  %s\n", r.message.c_str());
        status = std::max(status, r.exit_code);
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral toolkit for the dissipative surface quasi-geostrophic equation"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a solution on a grid");
    SolutionFlags eval_sol;
    eval_sol.attach(eval);
    double eval_t = 0.0;
    std::string eval_grid = "64", eval_out, eval_ppm;
    int eval_levels = 21;
    eval->add_option("--t", eval_t, "Time");
    eval->add_option("--grid", eval_grid, "Grid size N or NxM");
    eval->add_option("--out", eval_out, "CSV output path");
    eval->add_option("--ppm", eval_ppm, "PPM output path");
    eval->add_option("--levels", eval_levels, "Contour bands")->check(CLI::Range(2, 1000));

    // verify
    auto* verify = app.add_subcommand("verify", "Validate a solution and report PDE residuals");
    SolutionFlags verify_sol;
    verify_sol.attach(verify);
    std::string verify_grid = "64", verify_times = "0,1,10";
    double verify_tol = 1e-10;
    verify->add_option("--grid", verify_grid, "Grid size N or NxM");
    verify->add_option("--times", verify_times, "Times, comma-separated");
    verify->add_option("--tol", verify_tol, "Residual tolerance");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Evolve an initial field with the IFRK4 solver");
    ConfigFlags sim_flags;
    sim_flags.attach(sim, false);
    std::string sim_config, sim_in;
    sim->add_option("--config", sim_config, "Config file; flags override its values")->check(CLI::ExistingFile);
    sim->add_option("--in", sim_in, "Initial field from CSV instead of a solution")->check(CLI::ExistingFile);

    // render
    auto* render = app.add_subcommand("render", "Render a CSV field as a PPM contour image");
    std::string render_in, render_out;
    int render_levels = 21;
    render->add_option("--in", render_in, "CSV field")->required()->check(CLI::ExistingFile);
    render->add_option("--out", render_out, "PPM path")->required();
    render->add_option("--levels", render_levels, "Contour bands")->check(CLI::Range(2, 1000));

    // scenario
    auto* scen = app.add_subcommand("scenario", "Run config-driven scenarios");
    ConfigFlags scen_flags;
    scen_flags.attach(scen, true);
    std::vector<std::string> scen_configs, scen_builtins;
    int jobs = 1;
    scen->add_option("--config", scen_configs, "Config file (repeatable)")->check(CLI::ExistingFile);
    scen->add_option("--builtin", scen_builtins, "figure1 or constantin-negative (repeatable)");
    scen->add_option("--jobs", jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_code::ok : exit_code::usage_error;
    }

    try {
        if (*eval) return cmd_eval(eval_sol, eval_t, eval_grid, eval_out, eval_ppm, eval_levels);
        if (*verify) return cmd_verify(verify_sol, verify_grid, verify_times, verify_tol);
        if (*sim) return cmd_simulate(sim_config, sim_in, sim_flags);
        if (*render) return cmd_render(render_in, render_out, render_levels);
        if (*scen) return cmd_scenario(scen_configs, scen_builtins, scen_flags, jobs);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::usage_error;
    } catch (const ConfigError& e) {
        std::cerr << "config error:\n" << e.what() << "\n";
        return exit_code::usage_error;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::usage_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::runtime_error;
    }
    return exit_code::usage_error;
}
