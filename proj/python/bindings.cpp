#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sqg/config.hpp"
#include "sqg/errors.hpp"
#include "sqg/exact_solutions.hpp"
#include "sqg/field_io.hpp"
#include "sqg/integrator.hpp"
#include "sqg/scenario.hpp"
#include "sqg/spectral.hpp"
#include "sqg/verification.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sqg;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

// Arrays are indexed [j, i]: rows along y, columns along x.
GridSpec grid_of(const py::buffer_info& info) {
    if (info.ndim != 2) throw DomainError("expected a 2-D array");
    return GridSpec(static_cast<int>(info.shape[1]), static_cast<int>(info.shape[0]));
}

PhysicalField to_physical(const RealArray& a) {
    const auto info = a.request();
    const GridSpec g = grid_of(info);
    const auto* p = static_cast<const double*>(info.ptr);
    return PhysicalField(g, std::vector<double>(p, p + g.size()));
}

SpectralField to_spectral(const ComplexArray& a) {
    const auto info = a.request();
    const GridSpec g = grid_of(info);
    const auto* p = static_cast<const Complex*>(info.ptr);
    return SpectralField(g, std::vector<Complex>(p, p + g.size()));
}

RealArray to_array(const PhysicalField& f) {
    RealArray out({f.grid().ny(), f.grid().nx()});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

ComplexArray to_array(const SpectralField& s) {
    ComplexArray out({s.grid().ny(), s.grid().nx()});
    std::copy(s.coefficients().begin(), s.coefficients().end(), out.mutable_data());
    return out;
}

GridSpec make_grid(int nx, std::optional<int> ny) { return GridSpec(nx, ny.value_or(nx)); }

Solution resolve(const py::object& sol) {
    if (py::isinstance<py::str>(sol)) {
        const auto& sample = builtin_sample(sol.cast<std::string>());
        if (!sample.is_exact()) throw InvalidSolution(sample.name + " is not an exact solution");
        return std::get<Solution>(sample.content);
    }
    if (py::isinstance<EigenmodeSolution>(sol)) return sol.cast<EigenmodeSolution>();
    return sol.cast<UnidirectionalSolution>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral toolkit for the dissipative SQG equation on the 2-pi periodic square";

    auto base = py::register_exception<Error>(m, "SqgError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<SymmetryViolation>(m, "SymmetryViolation", base);
    py::register_exception<InvalidSolution>(m, "InvalidSolution", base);
    py::register_exception<UnderResolved>(m, "UnderResolved", base);
    py::register_exception<CflViolation>(m, "CflViolation", base);
    py::register_exception<BlowupDetected>(m, "BlowupDetected", base);
    py::register_exception<DegenerateFit>(m, "DegenerateFit", base);
    py::register_exception<ZeroField>(m, "ZeroField", base);
    py::register_exception<IoError>(m, "IoError", base);
    py::register_exception<FormatError>(m, "FormatError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    // Spectral operators on arrays of shape (ny, nx).
    m.def("forward_transform", [](const RealArray& f) { return to_array(forward_transform(to_physical(f))); },
          "f"_a, "Fourier coefficients normalized by 1/N, in FFT index order.");
    m.def("inverse_transform", [](const ComplexArray& s) { return to_array(inverse_transform(to_spectral(s))); },
          "s"_a);
    m.def("fractional_laplacian",
          [](const ComplexArray& s, double alpha) { return to_array(fractional_laplacian(to_spectral(s), alpha)); },
          "s"_a, "alpha"_a);
    m.def("inv_sqrt_laplacian", [](const ComplexArray& s) { return to_array(inv_sqrt_laplacian(to_spectral(s))); },
          "s"_a);
    m.def("derivative_x", [](const ComplexArray& s) { return to_array(derivative_x(to_spectral(s))); }, "s"_a);
    m.def("derivative_y", [](const ComplexArray& s) { return to_array(derivative_y(to_spectral(s))); }, "s"_a);
    m.def("velocity_from_theta", [](const ComplexArray& s) {
        auto [u, v] = velocity_from_theta(to_spectral(s));
        return py::make_tuple(to_array(u), to_array(v));
    }, "s"_a);
    m.def("divergence", [](const ComplexArray& u, const ComplexArray& v) {
        return to_array(divergence(to_spectral(u), to_spectral(v)));
    }, "u"_a, "v"_a);
    m.def("nonlinear_term",
          [](const ComplexArray& s, bool dealias) { return to_array(nonlinear_term(to_spectral(s), dealias)); },
          "s"_a, "dealias"_a = true, "Spectral coefficients of u . grad(theta).");

    // Exact solutions.
    py::class_<EigenmodeSolution>(m, "EigenmodeSolution")
        .def(py::init<>())
        .def(py::init([](std::array<double, 8> c, int n, int mm, int k, double kappa, double alpha) {
                 return EigenmodeSolution{c, n, mm, k, kappa, alpha};
             }),
             "c"_a, "n"_a = 1, "m"_a = 1, "k"_a = 0, "kappa"_a = 1e-3, "alpha"_a = 1e-3)
        .def_readwrite("c", &EigenmodeSolution::c)
        .def_readwrite("n", &EigenmodeSolution::n)
        .def_readwrite("m", &EigenmodeSolution::m)
        .def_readwrite("k", &EigenmodeSolution::k)
        .def_readwrite("kappa", &EigenmodeSolution::kappa)
        .def_readwrite("alpha", &EigenmodeSolution::alpha)
        .def("__repr__", [](const EigenmodeSolution& s) { return format_solution(s); });

    py::class_<UnidirectionalSolution>(m, "UnidirectionalSolution")
        .def(py::init([](int n, int mm, const std::vector<std::tuple<int, double, double>>& modes, double kappa,
                         double alpha) {
                 UnidirectionalSolution s{n, mm, {}, kappa, alpha};
                 for (const auto& [k, a, b] : modes) s.modes.push_back({k, a, b});
                 return s;
             }),
             "n"_a, "m"_a, "modes"_a, "kappa"_a = 1e-3, "alpha"_a = 1e-3,
             "modes: list of (k, a, b) for a cos(k(nx+my)) + b sin(k(nx+my)).")
        .def_readwrite("n", &UnidirectionalSolution::n)
        .def_readwrite("m", &UnidirectionalSolution::m)
        .def_property_readonly("modes", [](const UnidirectionalSolution& s) {
            std::vector<std::tuple<int, double, double>> out;
            for (const auto& md : s.modes) out.emplace_back(md.k, md.a, md.b);
            return out;
        })
        .def_readwrite("kappa", &UnidirectionalSolution::kappa)
        .def_readwrite("alpha", &UnidirectionalSolution::alpha)
        .def("__repr__", [](const UnidirectionalSolution& s) { return format_solution(s); });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("violations", &ValidationReport::violations)
        .def_readonly("notes", &ValidationReport::notes)
        .def_property_readonly("ok", &ValidationReport::ok)
        .def("__repr__", &ValidationReport::summary);

    m.def("builtin_names", [] {
        std::vector<std::string> names;
        for (const auto& s : builtin_samples()) names.push_back(s.name);
        return names;
    });
    m.def("builtin_solution", [](const std::string& name, std::optional<double> kappa, std::optional<double> alpha) {
        Solution sol = resolve(py::str(name));
        sol = with_params(sol, kappa.value_or(kappa_of(sol)), alpha.value_or(alpha_of(sol)));
        return std::visit([](const auto& s) { return py::cast(s); }, sol);
    }, "name"_a, "kappa"_a = py::none(), "alpha"_a = py::none());
    m.def("sample_datum", [](const std::string& name, int nx, std::optional<int> ny) {
        const auto& sample = builtin_sample(name);
        const GridSpec g = make_grid(nx, ny);
        if (const auto* d = std::get_if<InitialDatum>(&sample.content)) return to_array(d->sample(g));
        return to_array(eval_theta(std::get<Solution>(sample.content), 0.0, g));
    }, "name"_a, "nx"_a, "ny"_a = py::none(), "Any builtin (exact or not) sampled at t = 0.");
    m.def("validate", [](const py::object& sol) { return validate(resolve(sol)); }, "solution"_a);
    m.def("eval_theta", [](const py::object& sol, double t, int nx, std::optional<int> ny) {
        return to_array(eval_theta(resolve(sol), t, make_grid(nx, ny)));
    }, "solution"_a, "t"_a, "nx"_a, "ny"_a = py::none());
    m.def("eval_velocity", [](const py::object& sol, double t, int nx, std::optional<int> ny) {
        auto [u, v] = eval_velocity(resolve(sol), t, make_grid(nx, ny));
        return py::make_tuple(to_array(u), to_array(v));
    }, "solution"_a, "t"_a, "nx"_a, "ny"_a = py::none());
    m.def("format_solution", [](const py::object& sol) { return format_solution(resolve(sol)); }, "solution"_a);
    m.def("parse_solution", [](const std::string& text) {
        return std::visit([](const auto& s) { return py::cast(s); }, parse_solution(text));
    }, "text"_a);

    // Solver and verification.
    m.def("simulate", [](const RealArray& initial, double kappa, double alpha, double dt, double t_end,
                         std::vector<double> snapshot_times, bool dealias) {
        SolverParams p{kappa, alpha, dt, t_end, dealias, std::move(snapshot_times)};
        Trajectory traj;
        const PhysicalField init = to_physical(initial);
        {
            py::gil_scoped_release release;
            traj = simulate(init, p);
        }
        py::list out;
        for (const auto& s : traj.snapshots) out.append(py::make_tuple(s.t, to_array(s.field)));
        return out;
    }, "initial"_a, "kappa"_a, "alpha"_a, "dt"_a, "t_end"_a, "snapshot_times"_a = std::vector<double>{},
       "dealias"_a = true, "Integrate to t_end; returns [(t, field), ...] including t = 0.");
    m.def("cfl_time_step", [](const RealArray& f, bool dealias) {
        return cfl_time_step(forward_transform(to_physical(f)), dealias);
    }, "field"_a, "dealias"_a = true);
    m.def("residual", [](const py::object& sol, double t, int nx, std::optional<int> ny) {
        const ResidualReport r = residual(resolve(sol), t, make_grid(nx, ny));
        return py::dict("t"_a = r.t, "l_inf"_a = r.l_inf, "l2"_a = r.l2, "nonlinear_linf"_a = r.nonlinear_linf);
    }, "solution"_a, "t"_a, "nx"_a, "ny"_a = py::none());
    m.def("pattern_correlation", [](const RealArray& a, const RealArray& b) {
        return pattern_correlation(to_physical(a), to_physical(b));
    }, "a"_a, "b"_a);
    m.def("unidirectionality_check", [](const RealArray& f, int n, int mm) {
        return unidirectionality_check(to_physical(f), n, mm);
    }, "field"_a, "n"_a, "m"_a);

    // Files and scenarios.
    m.def("write_field_csv", [](const RealArray& f, const std::filesystem::path& path, double t) {
        write_field_csv(to_physical(f), path, t);
    }, "field"_a, "path"_a, "t"_a = 0.0);
    m.def("read_field_csv", [](const std::filesystem::path& path) {
        const FieldRecord r = read_field_record(path);
        return py::make_tuple(to_array(r.field), r.t);
    }, "path"_a, "Returns (field, t).");
    m.def("render_contour", [](const RealArray& f, const std::filesystem::path& path, int levels) {
        render_contour(to_physical(f), path, levels);
    }, "field"_a, "path"_a, "levels"_a = 21);
    m.def("run_scenario", [](const std::string& config_text, std::optional<std::filesystem::path> output_dir) {
        ScenarioConfig cfg = builtin_scenario(config_text).value_or(ScenarioConfig{});
        if (cfg.cases.empty()) cfg = parse_config(config_text);
        if (output_dir) cfg.output_dir = *output_dir;
        ScenarioResult res;
        {
            py::gil_scoped_release release;
            res = run_scenario(cfg);
        }
        py::list checks;
        for (const auto& c : res.checks) {
            checks.append(py::dict("name"_a = c.name, "t"_a = c.t, "value"_a = c.value, "tolerance"_a = c.tolerance,
                                   "comparison"_a = c.comparison, "pass"_a = c.pass));
        }
        return py::dict("exit_code"_a = res.exit_code, "message"_a = res.message, "checks"_a = checks,
                        "output_dir"_a = cfg.output_dir);
    }, "config"_a, "output_dir"_a = py::none(), "config: a builtin scenario name or config text.");
}
