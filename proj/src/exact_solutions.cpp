#include "sqg/exact_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "sqg/errors.hpp"

namespace sqg {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dissipation(double kappa, double alpha, ValidationReport& report) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        report.violations.push_back("kappa must be > 0 (got " + std::to_string(kappa) + ")");
    }
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        report.violations.push_back("alpha must lie in [0, 1) (got " + std::to_string(alpha) + ")");
    }
}

double decay(double kappa, double alpha, double eigenvalue, double t) {
    return std::exp(-kappa * std::pow(eigenvalue, alpha) * t);
}

// Values and first derivatives of one eigen-group, evaluated together.
struct GroupValue {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

GroupValue product_group(const EigenmodeSolution& s, double x, double y) {
    const auto& c = s.c;
    const double sx = std::sin(s.n * x), cx = std::cos(s.n * x);
    const double sy = std::sin(s.m * y), cy = std::cos(s.m * y);
    GroupValue g;
    g.value = c[0] * sx * sy + c[1] * cx * sy + c[2] * sx * cy + c[3] * cx * cy;
    g.dx = s.n * (c[0] * cx * sy - c[1] * sx * sy + c[2] * cx * cy - c[3] * sx * cy);
    g.dy = s.m * (c[0] * sx * cy + c[1] * cx * cy - c[2] * sx * sy - c[3] * cx * sy);
    return g;
}

GroupValue axis_group(const EigenmodeSolution& s, double x, double y) {
    const auto& c = s.c;
    const double sx = std::sin(s.k * x), cx = std::cos(s.k * x);
    const double sy = std::sin(s.k * y), cy = std::cos(s.k * y);
    GroupValue g;
    g.value = c[4] * sx + c[5] * sy + c[6] * cx + c[7] * cy;
    g.dx = s.k * (c[4] * cx - c[6] * sx);
    g.dy = s.k * (c[5] * cy - c[7] * sy);
    return g;
}

// Calls visit(value-group, eigenvalue) for every component of the solution.
template <typename Visit>
void for_each_group(const Solution& sol, double x, double y, Visit&& visit) {
    std::visit(Overloaded{
                   [&](const EigenmodeSolution& s) {
                       if (s.has_product_group()) {
                           visit(product_group(s, x, y), double(s.n * s.n + s.m * s.m));
                       }
                       if (s.has_axis_group()) visit(axis_group(s, x, y), double(s.k * s.k));
                   },
                   [&](const UnidirectionalSolution& s) {
                       const double phase = s.n * x + s.m * y;
                       for (const auto& mode : s.modes) {
                           const double arg = mode.k * phase;
                           const double ca = std::cos(arg), sa = std::sin(arg);
                           const double dphase = mode.k * (-mode.a * sa + mode.b * ca);
                           GroupValue g{mode.a * ca + mode.b * sa, dphase * s.n, dphase * s.m};
                           const double eig = double(mode.k * mode.k) * (s.n * s.n + s.m * s.m);
                           visit(g, eig);
                       }
                   },
               },
               sol);
}

template <typename PointFn>
PhysicalField eval_on_grid(const Solution& sol, const GridSpec& grid, PointFn&& fn) {
    require_valid(sol);
    PhysicalField out(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) out(i, j) = fn(grid.x(i), grid.y(j));
    }
    return out;
}

}  // namespace

bool EigenmodeSolution::has_product_group() const noexcept {
    return std::any_of(c.begin(), c.begin() + 4, [](double v) { return v != 0.0; });
}

bool EigenmodeSolution::has_axis_group() const noexcept {
    return std::any_of(c.begin() + 4, c.end(), [](double v) { return v != 0.0; });
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    if (ok()) {
        os << "valid";
    } else {
        os << "invalid:";
        for (const auto& v : violations) os << " [" << v << "]";
    }
    return os.str();
}

ValidationReport validate(const EigenmodeSolution& sol) {
    ValidationReport report;
    check_dissipation(sol.kappa, sol.alpha, report);
    if (!std::all_of(sol.c.begin(), sol.c.end(), [](double v) { return std::isfinite(v); })) {
        report.violations.push_back("coefficients must be finite");
    }
    if (sol.n == 0 || sol.m == 0) {
        report.violations.push_back("n*m must be nonzero (n=" + std::to_string(sol.n) +
                                    ", m=" + std::to_string(sol.m) + ")");
    }
    if (sol.has_axis_group() && sol.k == 0) {
        report.violations.push_back("k must be nonzero when c5..c8 are not all zero");
    }
    // The guard is read as (|c1|+..+|c4|)(|c5|+..+|c8|) != 0.
    report.notes.push_back(
        "constraint n^2+m^2=k^2 enforced only when both c1..c4 and c5..c8 are nonzero");
    if (sol.has_product_group() && sol.has_axis_group()) {
        const int lhs = sol.n * sol.n + sol.m * sol.m;
        const int rhs = sol.k * sol.k;
        if (lhs != rhs) {
            report.violations.push_back("constraint n^2+m^2=k^2 violated: " + std::to_string(lhs) +
                                        " != " + std::to_string(rhs));
        }
    }
    return report;
}

ValidationReport validate(const UnidirectionalSolution& sol) {
    ValidationReport report;
    check_dissipation(sol.kappa, sol.alpha, report);
    if (sol.n == 0 && sol.m == 0) {
        report.violations.push_back("|n|+|m| must be nonzero");
    }
    std::set<int> seen;
    for (const auto& mode : sol.modes) {
        if (!seen.insert(mode.k).second) {
            report.violations.push_back("duplicate mode wavenumber k=" + std::to_string(mode.k));
        }
        if (!std::isfinite(mode.a) || !std::isfinite(mode.b)) {
            report.violations.push_back("mode k=" + std::to_string(mode.k) +
                                        " has non-finite coefficients");
        }
        if (mode.k == 0 && (mode.a != 0.0 || mode.b != 0.0)) {
            report.notes.push_back(
                "k=0 mean mode present: constant for alpha>0, decays as exp(-kappa t) for alpha=0");
        }
    }
    report.notes.push_back("finite mode list: sum |k|(a_k^2+b_k^2) < inf holds trivially");
    return report;
}

ValidationReport validate(const Solution& sol) {
    return std::visit([](const auto& s) { return validate(s); }, sol);
}

void require_valid(const Solution& sol) {
    const ValidationReport report = validate(sol);
    if (!report.ok()) throw InvalidSolution(report.summary());
}

double kappa_of(const Solution& sol) noexcept {
    return std::visit([](const auto& s) { return s.kappa; }, sol);
}

double alpha_of(const Solution& sol) noexcept {
    return std::visit([](const auto& s) { return s.alpha; }, sol);
}

Solution with_params(Solution sol, double kappa, double alpha) {
    std::visit(
        [&](auto& s) {
            s.kappa = kappa;
            s.alpha = alpha;
        },
        sol);
    return sol;
}

double theta_at(const Solution& sol, double t, double x, double y) {
    const double kappa = kappa_of(sol), alpha = alpha_of(sol);
    double sum = 0.0;
    for_each_group(sol, x, y, [&](const GroupValue& g, double eig) {
        sum += decay(kappa, alpha, eig, t) * g.value;
    });
    return sum;
}

std::pair<double, double> velocity_at(const Solution& sol, double t, double x, double y) {
    const double kappa = kappa_of(sol), alpha = alpha_of(sol);
    double u = 0.0, v = 0.0;
    for_each_group(sol, x, y, [&](const GroupValue& g, double eig) {
        if (eig == 0.0) return;  // mean carries no velocity
        const double w = decay(kappa, alpha, eig, t) / std::sqrt(eig);
        u += w * g.dy;
        v -= w * g.dx;
    });
    return {u, v};
}

double dtheta_dt_at(const Solution& sol, double t, double x, double y) {
    const double kappa = kappa_of(sol), alpha = alpha_of(sol);
    double sum = 0.0;
    for_each_group(sol, x, y, [&](const GroupValue& g, double eig) {
        const double rate = kappa * std::pow(eig, alpha);
        sum -= rate * decay(kappa, alpha, eig, t) * g.value;
    });
    return sum;
}

PhysicalField eval_theta(const Solution& sol, double t, const GridSpec& grid) {
    return eval_on_grid(sol, grid, [&](double x, double y) { return theta_at(sol, t, x, y); });
}

std::pair<PhysicalField, PhysicalField> eval_velocity(const Solution& sol, double t,
                                                      const GridSpec& grid) {
    require_valid(sol);
    PhysicalField u(grid), v(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            std::tie(u(i, j), v(i, j)) = velocity_at(sol, t, grid.x(i), grid.y(j));
        }
    }
    return {std::move(u), std::move(v)};
}

PhysicalField eval_dtheta_dt(const Solution& sol, double t, const GridSpec& grid) {
    return eval_on_grid(sol, grid, [&](double x, double y) { return dtheta_dt_at(sol, t, x, y); });
}

std::vector<int> eigenvalues(const Solution& sol) {
    std::set<int> eig;
    std::visit(Overloaded{
                   [&](const EigenmodeSolution& s) {
                       if (s.has_product_group()) eig.insert(s.n * s.n + s.m * s.m);
                       if (s.has_axis_group()) eig.insert(s.k * s.k);
                   },
                   [&](const UnidirectionalSolution& s) {
                       for (const auto& mode : s.modes) {
                           if (mode.a == 0.0 && mode.b == 0.0) continue;
                           eig.insert(mode.k * mode.k * (s.n * s.n + s.m * s.m));
                       }
                   },
               },
               sol);
    return {eig.begin(), eig.end()};
}

std::pair<int, int> max_wavenumbers(const Solution& sol) {
    int kx = 0, ky = 0;
    std::visit(Overloaded{
                   [&](const EigenmodeSolution& s) {
                       if (s.has_product_group()) {
                           kx = std::max(kx, std::abs(s.n));
                           ky = std::max(ky, std::abs(s.m));
                       }
                       if (s.c[4] != 0.0 || s.c[6] != 0.0) kx = std::max(kx, std::abs(s.k));
                       if (s.c[5] != 0.0 || s.c[7] != 0.0) ky = std::max(ky, std::abs(s.k));
                   },
                   [&](const UnidirectionalSolution& s) {
                       for (const auto& mode : s.modes) {
                           if (mode.a == 0.0 && mode.b == 0.0) continue;
                           kx = std::max(kx, std::abs(mode.k * s.n));
                           ky = std::max(ky, std::abs(mode.k * s.m));
                       }
                   },
               },
               sol);
    return {kx, ky};
}

const std::vector<BuiltinSample>& builtin_samples() {
    static const std::vector<BuiltinSample> samples = [] {
        std::vector<BuiltinSample> out;

        EigenmodeSolution theta1;
        theta1.c = {1.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0};
        theta1.n = 2;
        theta1.m = 1;
        theta1.k = 0;
        out.push_back({"theta1", "e^{-5^a k t}(sin 2x sin y + 1/2 cos 2x cos y)", Solution{theta1}});

        EigenmodeSolution theta2;
        theta2.c = {1.0, 0.0, 0.0, 0.5, 0.5, 1.0, 0.0, 0.0};
        theta2.n = 4;
        theta2.m = 3;
        theta2.k = 5;
        out.push_back({"theta2",
                       "e^{-25^a k t}(sin 4x sin 3y + 1/2 cos 4x cos 3y + sin 5y + 1/2 sin 5x)",
                       Solution{theta2}});

        UnidirectionalSolution theta3;
        theta3.n = 1;
        theta3.m = 1;
        theta3.modes = {{1, 0.0, 1.0}, {2, 0.0, 1.0}};
        out.push_back({"theta3", "e^{-2^a k t} sin(x+y) + e^{-8^a k t} sin(2x+2y)",
                       Solution{theta3}});

        EigenmodeSolution con1_shape;
        con1_shape.c = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
        con1_shape.n = 1;
        con1_shape.m = 1;
        con1_shape.k = 1;
        out.push_back({"con-1", "sin x sin y + cos y",
                       InitialDatum{"sin x sin y + cos y",
                                    [](double x, double y) {
                                        return std::sin(x) * std::sin(y) + std::cos(y);
                                    },
                                    con1_shape, "mixes |k|^2 = 2 and |k|^2 = 1"}});
        out.push_back({"con-2", "-cos 2x cos y + sin x sin y",
                       InitialDatum{"-cos 2x cos y + sin x sin y",
                                    [](double x, double y) {
                                        return -std::cos(2 * x) * std::cos(y) +
                                               std::sin(x) * std::sin(y);
                                    },
                                    std::nullopt, "mixes |k|^2 = 5 and |k|^2 = 2"}});
        out.push_back({"con-3", "cos 2x cos y + sin x sin y + cos 2x sin 3y",
                       InitialDatum{"cos 2x cos y + sin x sin y + cos 2x sin 3y",
                                    [](double x, double y) {
                                        return std::cos(2 * x) * std::cos(y) +
                                               std::sin(x) * std::sin(y) +
                                               std::cos(2 * x) * std::sin(3 * y);
                                    },
                                    std::nullopt, "mixes |k|^2 = 5, 2 and 13"}});
        return out;
    }();
    return samples;
}

const BuiltinSample& builtin_sample(const std::string& name) {
    const auto& all = builtin_samples();
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.name == name; });
    if (it == all.end()) throw std::out_of_range("unknown builtin sample '" + name + "'");
    return *it;
}

}  // namespace sqg
