#include "sqg/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "sqg/errors.hpp"
#include "sqg/field_io.hpp"

namespace sqg {
namespace fs = std::filesystem;
namespace {

bool wants(const CheckSettings& s, CheckKind kind) {
    return std::find(s.kinds.begin(), s.kinds.end(), kind) != s.kinds.end();
}

class CaseRunner {
public:
    CaseRunner(const ScenarioConfig& cfg, const ScenarioCase& cs, ScenarioResult& out)
        : cfg_(cfg), case_(cs), out_(out), times_(cfg.output_times()) {}

    void run() {
        const Solution* sol = std::get_if<Solution>(&case_.initial);
        if (cfg_.mode == RunMode::Exact) {
            if (!sol) throw InvalidSolution(case_.name + " is not an exact solution");
            for (double t : times_) fields_.push_back(eval_theta(*sol, t, cfg_.grid));
        } else {
            const PhysicalField initial = sol ? eval_theta(*sol, 0.0, cfg_.grid)
                                              : std::get<InitialDatum>(case_.initial).sample(cfg_.grid);
            SolverParams p = cfg_.params;
            p.snapshot_times = times_;
            traj_ = simulate(initial, p);
            for (auto& snap : traj_.snapshots) fields_.push_back(snap.field);
        }
        write_artifacts();
        run_checks(sol);
    }

private:
    void write_artifacts() {
        for (std::size_t i = 0; i < times_.size(); ++i) {
            const std::string stem = case_.name + "_" + time_tag(times_[i]);
            if (cfg_.outputs.csv) {
                write_field_csv(fields_[i], cfg_.output_dir / (stem + ".csv"), times_[i]);
                out_.artifacts.push_back(stem + ".csv");
            }
            if (cfg_.outputs.ppm) {
                render_contour(fields_[i], cfg_.output_dir / (stem + ".ppm"), cfg_.levels);
                out_.artifacts.push_back(stem + ".ppm");
            }
        }
    }

    void add(CheckKind kind, double t, double value, double tol, const char* cmp) {
        out_.checks.push_back(make_check(case_.name + "/" + to_string(kind), t, value, tol, cmp));
    }

    bool enabled(CheckKind kind, bool auto_default) const {
        return cfg_.checks.automatic ? auto_default : wants(cfg_.checks, kind);
    }

    void run_checks(const Solution* sol) {
        const CheckSettings& s = cfg_.checks;
        const bool simulated = cfg_.mode == RunMode::Simulate;
        const bool single_rate = sol && eigenvalues(*sol).size() == 1;
        const auto* uni = sol ? std::get_if<UnidirectionalSolution>(sol) : nullptr;

        if (sol && enabled(CheckKind::Residual, true)) {
            try {
                for (double t : times_) {
                    add(CheckKind::Residual, t, residual(*sol, t, cfg_.grid).l_inf, s.residual_tol, "<");
                }
            } catch (const UnderResolved&) {
                if (!s.automatic) throw;
            }
        }
        if (sol && simulated && enabled(CheckKind::SolverError, true)) {
            for (std::size_t i = 1; i < times_.size(); ++i) {
                const PhysicalField exact = eval_theta(*sol, times_[i], cfg_.grid);
                PhysicalField diff = fields_[i];
                for (std::size_t k = 0; k < diff.values().size(); ++k) diff.values()[k] -= exact.values()[k];
                add(CheckKind::SolverError, times_[i], l2_norm(diff) / l2_norm(exact), s.solver_error_tol, "<");
            }
        }
        if (sol && enabled(CheckKind::Correlation, single_rate)) {
            for (std::size_t i = 1; i < times_.size(); ++i) {
                add(CheckKind::Correlation, times_[i], pattern_correlation(fields_[i], fields_[0]),
                    s.correlation_tol, "abs1");
            }
        }
        if (uni && enabled(CheckKind::Unidirectional, true)) {
            for (std::size_t i = 0; i < times_.size(); ++i) {
                add(CheckKind::Unidirectional, times_[i], unidirectionality_check(fields_[i], uni->n, uni->m),
                    s.unidirectional_tol, "<");
            }
        }
        if (single_rate && simulated && times_.size() >= 3 && enabled(CheckKind::DecayRate, true)) {
            const DecayFit fit = decay_rate_fit(traj_, eigenvalues(*sol).front(), kappa_of(*sol), alpha_of(*sol));
            add(CheckKind::DecayRate, times_.back(), fit.relative_error, s.decay_tol, "<");
        }
        if (times_.size() > 1 && enabled(CheckKind::PatternChange, !sol)) {
            add(CheckKind::PatternChange, times_.back(), pattern_correlation(fields_.back(), fields_.front()),
                s.change_threshold, "<");
        }
    }

    const ScenarioConfig& cfg_;
    const ScenarioCase& case_;
    ScenarioResult& out_;
    std::vector<double> times_;
    std::vector<PhysicalField> fields_;
    Trajectory traj_;
};

void write_report(const ScenarioConfig& cfg, ScenarioResult& res) {
    std::ofstream file(cfg.output_dir / "report.csv", std::ios::binary);
    if (!file) throw IoError("cannot write " + (cfg.output_dir / "report.csv").string());
    file << report_csv_header() << '\n';
    for (const auto& c : res.checks) file << to_csv_row(c) << '\n';
    if (!file) throw IoError("write to report.csv failed");
    res.artifacts.push_back("report.csv");
}

void write_summary(const ScenarioConfig& cfg, const ScenarioResult& res) {
    nlohmann::ordered_json j;
    j["scenario"] = cfg.name;
    j["exit_code"] = res.exit_code;
    j["status"] = res.exit_code == exit_code::ok                     ? "pass"
                  : res.exit_code == exit_code::verification_failure ? "verification_failure"
                                                                     : "runtime_error";
    j["message"] = res.message;
    j["failed_checks"] = nlohmann::json::array();
    for (const auto& c : res.checks) {
        if (!c.pass) j["failed_checks"].push_back({{"check", c.name}, {"t", c.t}, {"value", c.value}});
    }
    j["artifacts"] = nlohmann::json::array();
    for (const auto& a : res.artifacts) j["artifacts"].push_back(a.generic_string());
    std::ofstream file(cfg.output_dir / "summary.json", std::ios::binary);
    file << j.dump(2) << '\n';
}

}  // namespace

std::string time_tag(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "t%.10g", t);
    return buf;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    ScenarioResult res;
    bool have_dir = false;
    try {
        fs::create_directories(config.output_dir);
        have_dir = true;
        for (const auto& cs : config.cases) CaseRunner(config, cs, res).run();
        if (config.outputs.report) write_report(config, res);
        const auto failed = std::count_if(res.checks.begin(), res.checks.end(),
                                          [](const CheckResult& c) { return !c.pass; });
        if (failed > 0) {
            res.exit_code = exit_code::verification_failure;
            res.message = std::to_string(failed) + " of " + std::to_string(res.checks.size()) + " checks failed";
        }
    } catch (const std::exception& e) {
        res.exit_code = exit_code::runtime_error;
        res.message = e.what();
    }
    if (have_dir) {
        try {
            write_summary(config, res);
        } catch (const std::exception&) {
            // The result object still carries the status.
        }
    }
    return res;
}

}  // namespace sqg
