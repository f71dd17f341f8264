#include "sqg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sqg {
namespace {

struct Entry {
    int line = 0;
    std::string key;
    std::string value;
};

struct Section {
    int line = 0;  // header line, 0 for the root block
    std::string name;
    std::vector<Entry> entries;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

std::vector<Section> lex(const std::string& text, std::vector<ConfigIssue>& issues) {
    std::vector<Section> sections(1);
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            const std::string name = s.back() == ']' ? trim(s.substr(1, s.size() - 2)) : "";
            if (name.empty()) {
                issues.push_back({line, ConfigErrorKind::ParseError, "malformed section header '" + s + "'"});
                continue;
            }
            sections.push_back({line, name, {}});
            continue;
        }
        const auto eq = s.find('=');
        const std::string key = eq == std::string::npos ? "" : trim(s.substr(0, eq));
        if (key.empty()) {
            issues.push_back({line, ConfigErrorKind::ParseError, "expected 'key = value', got '" + s + "'"});
            continue;
        }
        sections.back().entries.push_back({line, key, trim(s.substr(eq + 1))});
    }
    return sections;
}

// Collects values and issues for one config text.
class Reader {
public:
    explicit Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

    void fail(int line, ConfigErrorKind kind, std::string msg) {
        issues_.push_back({line, kind, std::move(msg)});
    }
    void bad_value(const Entry& e, const std::string& expected) {
        fail(e.line, ConfigErrorKind::ParseError,
             "'" + e.key + "': expected " + expected + ", got '" + e.value + "'");
    }
    void violation(const Entry& e, const std::string& msg) {
        fail(e.line, ConfigErrorKind::ConstraintViolation, "'" + e.key + "': " + msg);
    }

    std::optional<double> real(const Entry& e) {
        double v = 0.0;
        const char* end = e.value.data() + e.value.size();
        const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
        if (e.value.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
            bad_value(e, "a finite number");
            return std::nullopt;
        }
        return v;
    }

    std::optional<int> integer(const Entry& e) {
        int v = 0;
        const char* end = e.value.data() + e.value.size();
        const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
        if (e.value.empty() || ec != std::errc() || ptr != end) {
            bad_value(e, "an integer");
            return std::nullopt;
        }
        return v;
    }

    std::optional<bool> flag(const Entry& e) {
        static const std::set<std::string> yes{"1", "true", "on", "yes"}, no{"0", "false", "off", "no"};
        if (yes.count(e.value)) return true;
        if (no.count(e.value)) return false;
        bad_value(e, "true or false");
        return std::nullopt;
    }

    std::optional<double> positive(const Entry& e) {
        auto v = real(e);
        if (v && !(*v > 0.0)) {
            violation(e, "must be > 0");
            return std::nullopt;
        }
        return v;
    }

private:
    std::vector<ConfigIssue>& issues_;
};

const std::map<std::string, std::set<std::string>>& scalar_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"name", {""}},
        {"solution", {""}},
        {"mode", {""}},
        {"kappa", {"", "solver"}},
        {"alpha", {"", "solver"}},
        {"dt", {"", "solver"}},
        {"t_end", {"", "solver"}},
        {"dealias", {"", "solver"}},
        {"snapshots", {"", "solver"}},
        {"grid", {"", "solver"}},
        {"output_dir", {"", "output"}},
        {"outputs", {"", "output"}},
        {"levels", {"", "output"}},
        {"checks", {"", "checks"}},
        {"residual_tol", {"", "checks"}},
        {"solver_error_tol", {"", "checks"}},
        {"correlation_tol", {"", "checks"}},
        {"unidirectional_tol", {"", "checks"}},
        {"decay_tol", {"", "checks"}},
        {"change_threshold", {"", "checks"}},
    };
    return keys;
}

const std::map<std::string, CheckKind>& check_names() {
    static const std::map<std::string, CheckKind> names{
        {"residual", CheckKind::Residual},
        {"solver_error", CheckKind::SolverError},
        {"correlation", CheckKind::Correlation},
        {"unidirectional", CheckKind::Unidirectional},
        {"decay", CheckKind::DecayRate},
        {"pattern_change", CheckKind::PatternChange},
    };
    return names;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Explicit solution sections. κ and α are filled in later.
std::optional<std::pair<std::string, Solution>> read_solution_section(const Section& sec, Reader& r) {
    const bool eigen = sec.name == "eigenmode";
    std::string name = sec.name;
    EigenmodeSolution e;
    UnidirectionalSolution u;
    u.n = u.m = 0;
    bool ok = true;
    std::set<std::string> seen;
    for (const Entry& entry : sec.entries) {
        if (!seen.insert(entry.key).second) {
            r.fail(entry.line, ConfigErrorKind::ParseError, "duplicate key '" + entry.key + "'");
            ok = false;
            continue;
        }
        const std::string& k = entry.key;
        if (k == "name") {
            name = entry.value;
        } else if (eigen && k.size() == 2 && k[0] == 'c' && k[1] >= '1' && k[1] <= '8') {
            if (auto v = r.real(entry)) e.c[k[1] - '1'] = *v; else ok = false;
        } else if (k == "n" || k == "m" || (eigen && k == "k")) {
            auto v = r.integer(entry);
            if (!v) { ok = false; continue; }
            int& dst = eigen ? (k == "n" ? e.n : k == "m" ? e.m : e.k) : (k == "n" ? u.n : u.m);
            dst = *v;
        } else if (!eigen && k == "modes") {
            for (const std::string& item : split_list(entry.value)) {
                int kk = 0;
                double a = 0.0, b = 0.0;
                char tail = 0;
                if (std::sscanf(item.c_str(), "%d:%lf:%lf%c", &kk, &a, &b, &tail) != 3 ||
                    !std::isfinite(a) || !std::isfinite(b)) {
                    r.bad_value(entry, "modes as 'k:a:b, ...'");
                    ok = false;
                    break;
                }
                u.modes.push_back({kk, a, b});
            }
        } else {
            r.fail(entry.line, ConfigErrorKind::UnknownKey,
                   "unknown key '" + k + "' in [" + sec.name + "]");
            ok = false;
        }
    }
    if (!ok) return std::nullopt;
    if (eigen) return std::pair<std::string, Solution>{name, e};
    return std::pair<std::string, Solution>{name, u};
}

void check_solution(Solution& sol, double kappa, double alpha, int line, Reader& r,
                    const std::string& label) {
    sol = with_params(std::move(sol), kappa, alpha);
    const ValidationReport report = validate(sol);
    for (const std::string& v : report.violations) {
        r.fail(line, ConfigErrorKind::ConstraintViolation, label + ": " + v);
    }
}

std::string describe(const std::vector<ConfigIssue>& issues) {
    std::string out;
    for (const auto& i : issues) {
        if (!out.empty()) out += '\n';
        out += (i.line > 0 ? "line " + std::to_string(i.line) + ": " : std::string()) +
               to_string(i.kind) + ": " + i.message;
    }
    return out;
}

}  // namespace

const char* to_string(ConfigErrorKind kind) noexcept {
    switch (kind) {
        case ConfigErrorKind::ParseError: return "ParseError";
        case ConfigErrorKind::UnknownKey: return "UnknownKey";
        case ConfigErrorKind::ConstraintViolation: return "ConstraintViolation";
    }
    return "?";
}

const char* to_string(CheckKind kind) noexcept {
    for (const auto& [name, k] : check_names()) {
        if (k == kind) return name.c_str();
    }
    return "?";
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(describe(issues)), issues_(std::move(issues)) {}

bool ConfigError::has(ConfigErrorKind kind) const noexcept {
    return std::any_of(issues_.begin(), issues_.end(), [&](const ConfigIssue& i) { return i.kind == kind; });
}

std::vector<double> ScenarioConfig::output_times() const {
    std::vector<double> times{0.0};
    times.insert(times.end(), params.snapshot_times.begin(), params.snapshot_times.end());
    times.push_back(params.t_end);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

ScenarioConfig parse_config(const std::string& text, const ConfigOverrides& overrides) {
    std::vector<ConfigIssue> issues;
    Reader r(issues);
    const std::vector<Section> sections = lex(text, issues);

    std::map<std::string, Entry> values;
    std::vector<std::pair<int, std::pair<std::string, Solution>>> explicit_solutions;
    for (const Section& sec : sections) {
        if (sec.name == "eigenmode" || sec.name == "unidirectional") {
            if (auto s = read_solution_section(sec, r)) explicit_solutions.push_back({sec.line, *s});
            continue;
        }
        if (!sec.name.empty() && sec.name != "solver" && sec.name != "output" && sec.name != "checks") {
            r.fail(sec.line, ConfigErrorKind::UnknownKey, "unknown section [" + sec.name + "]");
            continue;
        }
        for (const Entry& e : sec.entries) {
            const auto it = scalar_keys().find(e.key);
            if (it == scalar_keys().end() || !it->second.count(sec.name)) {
                r.fail(e.line, ConfigErrorKind::UnknownKey,
                       "unknown key '" + e.key + "'" + (sec.name.empty() ? "" : " in [" + sec.name + "]"));
                continue;
            }
            if (const auto prev = values.find(e.key); prev != values.end()) {
                r.fail(e.line, ConfigErrorKind::ParseError,
                       "duplicate key '" + e.key + "' (first set on line " +
                           std::to_string(prev->second.line) + ")");
                continue;
            }
            values.emplace(e.key, e);
        }
    }

    for (const auto& [key, value] : overrides) {
        if (!scalar_keys().count(key)) {
            r.fail(0, ConfigErrorKind::UnknownKey, "unknown override key '" + key + "'");
            continue;
        }
        values.insert_or_assign(key, Entry{0, key, value});
    }

    auto get = [&](const char* key) -> const Entry* {
        const auto it = values.find(key);
        return it == values.end() ? nullptr : &it->second;
    };

    ScenarioConfig cfg;
    if (const Entry* e = get("name")) cfg.name = e->value;
    if (const Entry* e = get("mode")) {
        if (e->value == "exact") cfg.mode = RunMode::Exact;
        else if (e->value == "simulate") cfg.mode = RunMode::Simulate;
        else r.bad_value(*e, "'exact' or 'simulate'");
    }

    std::vector<std::string> missing;
    auto require = [&](const char* key) {
        const Entry* e = get(key);
        if (!e) missing.push_back(key);
        return e;
    };
    const bool has_solution = get("solution") || !explicit_solutions.empty();
    if (!has_solution) missing.push_back("solution");

    SolverParams& p = cfg.params;
    bool kappa_ok = false, alpha_ok = false;
    if (const Entry* e = require("kappa")) {
        if (auto v = r.positive(*e)) {
            p.kappa = *v;
            kappa_ok = true;
        }
    }
    if (const Entry* e = require("alpha")) {
        if (auto v = r.real(*e)) {
            if (*v >= 0.0 && *v < 1.0) {
                p.alpha = *v;
                alpha_ok = true;
            } else {
                r.violation(*e, "alpha = " + e->value + " outside [0, 1)");
            }
        }
    }
    const Entry* dt_entry = cfg.mode == RunMode::Simulate ? require("dt") : get("dt");
    if (dt_entry) {
        if (auto v = r.positive(*dt_entry)) p.dt = *v;
    }
    const Entry* t_end_entry = require("t_end");
    if (t_end_entry) {
        if (auto v = r.real(*t_end_entry)) {
            if (*v >= 0.0) p.t_end = *v;
            else r.violation(*t_end_entry, "must be >= 0");
        }
    }
    if (const Entry* e = require("grid")) {
        int nx = 0, ny = 0;
        char tail = 0;
        const int got = std::sscanf(e->value.c_str(), "%dx%d%c", &nx, &ny, &tail);
        if (got == 1 && e->value.find('x') == std::string::npos) ny = nx;
        if (!(got == 2 || (got == 1 && ny == nx))) {
            r.bad_value(*e, "N or NxM");
        } else {
            try {
                cfg.grid = GridSpec(nx, ny);
            } catch (const DomainError& err) {
                r.violation(*e, err.what());
            }
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        r.fail(0, ConfigErrorKind::ParseError, "missing required keys: " + list);
    }

    if (const Entry* e = get("dealias")) {
        if (auto v = r.flag(*e)) p.dealias = *v;
    }
    if (const Entry* e = get("snapshots")) {
        for (const std::string& item : split_list(e->value)) {
            if (auto v = r.real({e->line, e->key, item})) p.snapshot_times.push_back(*v);
        }
        if (!std::is_sorted(p.snapshot_times.begin(), p.snapshot_times.end())) {
            r.violation(*e, "snapshot times must be sorted");
        }
        for (double t : p.snapshot_times) {
            if (t < 0.0 || t > p.t_end) {
                r.violation(*e, "snapshot time " + format_real(t) + " outside [0, t_end]");
                break;
            }
        }
    }
    if (cfg.mode == RunMode::Simulate && dt_entry && t_end_entry && p.t_end > 0.0 && p.dt > p.t_end) {
        r.violation(*dt_entry, "dt must not exceed t_end");
    }

    if (const Entry* e = get("output_dir")) cfg.output_dir = e->value;
    if (const Entry* e = get("outputs")) {
        cfg.outputs = {false, false, false};
        for (const std::string& kind : split_list(e->value)) {
            if (kind == "csv") cfg.outputs.csv = true;
            else if (kind == "ppm" || kind == "pgm") cfg.outputs.ppm = true;
            else if (kind == "report") cfg.outputs.report = true;
            else r.bad_value(*e, "a list of csv, ppm, report");
        }
    }
    if (const Entry* e = get("levels")) {
        if (auto v = r.integer(*e)) {
            if (*v >= 2) cfg.levels = *v;
            else r.violation(*e, "levels must be >= 2");
        }
    }

    CheckSettings& c = cfg.checks;
    if (const Entry* e = get("checks")) {
        const auto names = split_list(e->value);
        if (names.size() == 1 && names[0] == "none") {
            c.automatic = false;
        } else if (!(names.size() == 1 && names[0] == "auto")) {
            c.automatic = false;
            for (const std::string& n : names) {
                const auto it = check_names().find(n);
                if (it == check_names().end()) {
                    r.bad_value(*e, "auto or a list of residual, solver_error, correlation, "
                                    "unidirectional, decay, pattern_change");
                    break;
                }
                c.kinds.push_back(it->second);
                if (cfg.mode == RunMode::Exact &&
                    (it->second == CheckKind::SolverError || it->second == CheckKind::DecayRate)) {
                    r.violation(*e, "check '" + n + "' needs mode = simulate");
                }
            }
        }
    }
    for (auto [key, dst] : {std::pair{"residual_tol", &c.residual_tol},
                            {"solver_error_tol", &c.solver_error_tol},
                            {"correlation_tol", &c.correlation_tol},
                            {"unidirectional_tol", &c.unidirectional_tol},
                            {"decay_tol", &c.decay_tol}}) {
        if (const Entry* e = get(key)) {
            if (auto v = r.positive(*e)) *dst = *v;
        }
    }
    if (const Entry* e = get("change_threshold")) {
        if (auto v = r.real(*e)) {
            if (*v > -1.0 && *v <= 1.0) c.change_threshold = *v;
            else r.violation(*e, "must lie in (-1, 1]");
        }
    }

    // Solutions are checked with the configured κ and α.
    const bool params_ok = kappa_ok && alpha_ok;
    if (const Entry* e = get("solution")) {
        const auto names = split_list(e->value);
        if (names.empty()) r.bad_value(*e, "one or more builtin solution names");
        for (const std::string& name : names) {
            const BuiltinSample* sample = nullptr;
            try {
                sample = &builtin_sample(name);
            } catch (const std::out_of_range&) {
                r.violation(*e, "unknown builtin solution '" + name + "'");
                continue;
            }
            if (const auto* sol = std::get_if<Solution>(&sample->content)) {
                Solution s = *sol;
                if (params_ok) check_solution(s, p.kappa, p.alpha, e->line, r, name);
                cfg.cases.push_back({name, s});
            } else {
                const auto& datum = std::get<InitialDatum>(sample->content);
                if (cfg.mode == RunMode::Exact) {
                    r.violation(*e, "'" + name + "' is not an exact solution (" + datum.not_exact_reason +
                                        "); use mode = simulate");
                }
                cfg.cases.push_back({name, datum});
            }
        }
    }
    for (auto& [line, named] : explicit_solutions) {
        Solution s = named.second;
        if (params_ok) check_solution(s, p.kappa, p.alpha, line, r, named.first);
        cfg.cases.push_back({named.first, s});
    }
    std::set<std::string> case_names;
    for (const auto& cs : cfg.cases) {
        if (!case_names.insert(cs.name).second) {
            r.fail(0, ConfigErrorKind::ConstraintViolation, "duplicate solution name '" + cs.name + "'");
        }
    }

    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(), [](const ConfigIssue& a, const ConfigIssue& b) {
            return a.line < b.line;
        });
        throw ConfigError(std::move(issues));
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

std::optional<ScenarioConfig> builtin_scenario(const std::string& name, const ConfigOverrides& overrides) {
    if (name == "figure1") {
        return parse_config(
            "name = figure1\n"
            "solution = theta1, theta2, theta3\n"
            "mode = exact\n"
            "kappa = 0.001\nalpha = 0.001\nt_end = 100\ngrid = 256\n"
            "output_dir = figure1\nlevels = 21\n",
            overrides);
    }
    if (name == "constantin-negative") {
        return parse_config(
            "name = constantin-negative\n"
            "solution = con-1\n"
            "mode = simulate\n"
            "kappa = 0.001\nalpha = 0.4\ndt = 0.005\nt_end = 5\ngrid = 128\n"
            "output_dir = constantin-negative\nlevels = 21\n",
            overrides);
    }
    return std::nullopt;
}

std::vector<std::string> builtin_scenario_names() { return {"figure1", "constantin-negative"}; }

std::string format_solution(const Solution& sol) {
    std::ostringstream out;
    out << "kappa = " << format_real(kappa_of(sol)) << "\n";
    out << "alpha = " << format_real(alpha_of(sol)) << "\n";
    if (const auto* e = std::get_if<EigenmodeSolution>(&sol)) {
        out << "[eigenmode]\n";
        for (int i = 0; i < 8; ++i) out << "c" << i + 1 << " = " << format_real(e->c[i]) << "\n";
        out << "n = " << e->n << "\nm = " << e->m << "\nk = " << e->k << "\n";
    } else {
        const auto& u = std::get<UnidirectionalSolution>(sol);
        out << "[unidirectional]\nn = " << u.n << "\nm = " << u.m << "\nmodes = ";
        for (std::size_t i = 0; i < u.modes.size(); ++i) {
            const auto& md = u.modes[i];
            out << (i ? ", " : "") << md.k << ":" << format_real(md.a) << ":" << format_real(md.b);
        }
        out << "\n";
    }
    return out.str();
}

Solution parse_solution(const std::string& text) {
    std::vector<ConfigIssue> issues;
    Reader r(issues);
    const std::vector<Section> sections = lex(text, issues);

    std::optional<double> kappa, alpha;
    std::optional<Solution> sol;
    int sol_line = 0;
    for (const Section& sec : sections) {
        if (sec.name.empty()) {
            for (const Entry& e : sec.entries) {
                if (e.key == "kappa") kappa = r.positive(e);
                else if (e.key == "alpha") alpha = r.real(e);
                else r.fail(e.line, ConfigErrorKind::UnknownKey, "unknown key '" + e.key + "'");
            }
        } else if (sec.name == "eigenmode" || sec.name == "unidirectional") {
            if (sol) {
                r.fail(sec.line, ConfigErrorKind::ParseError, "more than one solution section");
                continue;
            }
            if (auto s = read_solution_section(sec, r)) {
                sol = s->second;
                sol_line = sec.line;
            }
        } else {
            r.fail(sec.line, ConfigErrorKind::UnknownKey, "unknown section [" + sec.name + "]");
        }
    }
    if (!sol && issues.empty()) {
        r.fail(0, ConfigErrorKind::ParseError, "missing [eigenmode] or [unidirectional] section");
    }
    if (sol) {
        check_solution(*sol, kappa.value_or(kappa_of(*sol)), alpha.value_or(alpha_of(*sol)), sol_line, r,
                       "solution");
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return *sol;
}

}  // namespace sqg
