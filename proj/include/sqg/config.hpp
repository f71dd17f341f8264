#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqg/errors.hpp"
#include "sqg/exact_solutions.hpp"
#include "sqg/field.hpp"
#include "sqg/integrator.hpp"

namespace sqg {

enum class ConfigErrorKind { ParseError, UnknownKey, ConstraintViolation };

const char* to_string(ConfigErrorKind kind) noexcept;

struct ConfigIssue {
    int line = 0;  // 1-based; 0 when the issue concerns the file as a whole
    ConfigErrorKind kind = ConfigErrorKind::ParseError;
    std::string message;
};

/// Every problem found in a config text, in line order.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }
    bool has(ConfigErrorKind kind) const noexcept;

private:
    std::vector<ConfigIssue> issues_;
};

enum class RunMode { Exact, Simulate };

/// One field to evaluate or evolve: an exact solution or a non-exact datum.
struct ScenarioCase {
    std::string name;
    std::variant<Solution, InitialDatum> initial;

    bool is_exact() const noexcept { return std::holds_alternative<Solution>(initial); }
};

struct OutputKinds {
    bool csv = true;
    bool ppm = true;
    bool report = true;
};

/// Checks a scenario may run. Auto picks the ones that apply to each case.
enum class CheckKind {
    Residual,        // PDE residual L∞ of exact solutions
    SolverError,     // relative L2 distance of the solver from the closed form
    Correlation,     // pattern correlation with t = 0 stays at 1
    Unidirectional,  // energy off the (n, m) ray stays at 0
    DecayRate,       // fitted L2 decay rate of single-eigenvalue solutions
    PatternChange,   // correlation with t = 0 falls below a threshold
};

const char* to_string(CheckKind kind) noexcept;

struct CheckSettings {
    bool automatic = true;
    std::vector<CheckKind> kinds;  // used when !automatic
    double residual_tol = 1e-10;
    double solver_error_tol = 1e-8;
    double correlation_tol = 1e-10;
    double unidirectional_tol = 1e-12;
    double decay_tol = 1e-6;
    double change_threshold = 0.999;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::vector<ScenarioCase> cases;
    RunMode mode = RunMode::Simulate;
    SolverParams params;
    GridSpec grid{64};
    std::filesystem::path output_dir = "sqg_out";
    OutputKinds outputs;
    int levels = 21;
    CheckSettings checks;

    /// 0 plus snapshot_times plus t_end, sorted and unique.
    std::vector<double> output_times() const;
};

/// Parses the line-oriented config format:
///
///   # comment
///   key = value
///   [section]
///
/// Root keys: name, solution (comma-separated builtin names), mode
/// (exact | simulate), kappa, alpha, dt, t_end, dealias, snapshots, grid
/// (N or NxM), output_dir, outputs (csv, ppm, report), levels, checks
/// (auto, none, or a list), and the check tolerances. Sections [solver], [output]
/// and [checks] accept the corresponding subsets. [eigenmode] (name, c1..c8,
/// n, m, k) and [unidirectional] (name, n, m, modes = "k:a:b, ...") add an
/// explicit solution that takes κ and α from the solver keys.
///
/// Required: a solution, kappa, alpha, t_end, grid, and dt in simulate mode.
/// `overrides` are root-level key/value pairs that replace the file's values
/// (issues about them report line 0). Throws ConfigError listing every issue.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;
ScenarioConfig parse_config(const std::string& text, const ConfigOverrides& overrides = {});
ScenarioConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// "figure1" and "constantin-negative"; nullopt for other names.
std::optional<ScenarioConfig> builtin_scenario(const std::string& name, const ConfigOverrides& overrides = {});
std::vector<std::string> builtin_scenario_names();

/// Plain-text form of a solution in the config format (kappa, alpha and one
/// [eigenmode] or [unidirectional] section). parse_solution inverts it and
/// throws ConfigError, including ConstraintViolation for invalid solutions.
std::string format_solution(const Solution& sol);
Solution parse_solution(const std::string& text);

}  // namespace sqg
