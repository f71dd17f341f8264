#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sqg/field.hpp"

namespace sqg {

/// Decaying Laplacian eigenmodes on the torus:
///
///   θ = e^{−κ(n²+m²)^α t} (c1 sin nx sin my + c2 cos nx sin my
///                          + c3 sin nx cos my + c4 cos nx cos my)
///     + e^{−κ|k|^{2α} t}  (c5 sin kx + c6 sin ky + c7 cos kx + c8 cos ky)
///
/// Both groups are eigenfunctions of (−Δ)^{−1/2}, so when they share an
/// eigenvalue (n² + m² = k²) the advection term vanishes and θ is an exact
/// solution of the dissipative SQG equation.
struct EigenmodeSolution {
    std::array<double, 8> c{};  // c[0] is c1, …, c[7] is c8
    int n = 1;
    int m = 1;
    int k = 0;
    double kappa = 1e-3;
    double alpha = 1e-3;

    /// Whether c1..c4 (resp. c5..c8) contain a nonzero entry.
    bool has_product_group() const noexcept;
    bool has_axis_group() const noexcept;
};

struct UnidirectionalMode {
    int k = 1;
    double a = 0.0;  // coefficient of cos(k(nx + my))
    double b = 0.0;  // coefficient of sin(k(nx + my))
};

/// θ = Σ_k e^{−κ(k²(n²+m²))^α t} (a_k cos(k(nx+my)) + b_k sin(k(nx+my))), a
/// finite sum. θ is constant along the lines nx + my = const, so the velocity
/// runs parallel to them and u·∇θ = 0.
struct UnidirectionalSolution {
    int n = 1;
    int m = 1;
    std::vector<UnidirectionalMode> modes;
    double kappa = 1e-3;
    double alpha = 1e-3;
};

using Solution = std::variant<EigenmodeSolution, UnidirectionalSolution>;

struct ValidationReport {
    std::vector<std::string> violations;  // any entry means "not an exact solution"
    std::vector<std::string> notes;       // assumptions and informational flags

    bool ok() const noexcept { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const EigenmodeSolution& sol);
ValidationReport validate(const UnidirectionalSolution& sol);
ValidationReport validate(const Solution& sol);

/// Throws InvalidSolution carrying the report summary if validation fails.
void require_valid(const Solution& sol);

double kappa_of(const Solution& sol) noexcept;
double alpha_of(const Solution& sol) noexcept;

/// Copy of `sol` with the dissipation parameters replaced.
Solution with_params(Solution sol, double kappa, double alpha);

/// Pointwise closed forms at an arbitrary (x, y). No validation is performed.
double theta_at(const Solution& sol, double t, double x, double y);
std::pair<double, double> velocity_at(const Solution& sol, double t, double x, double y);
double dtheta_dt_at(const Solution& sol, double t, double x, double y);

/// Grid evaluations; all throw InvalidSolution when `sol` fails validation.
PhysicalField eval_theta(const Solution& sol, double t, const GridSpec& grid);
std::pair<PhysicalField, PhysicalField> eval_velocity(const Solution& sol, double t,
                                                      const GridSpec& grid);
PhysicalField eval_dtheta_dt(const Solution& sol, double t, const GridSpec& grid);

/// Distinct squared wavenumber magnitudes carried by the solution's nonzero
/// components (one entry means θ(t) is a scalar multiple of θ(0)).
std::vector<int> eigenvalues(const Solution& sol);

/// Largest |kx| and |ky| present among the solution's nonzero components.
std::pair<int, int> max_wavenumbers(const Solution& sol);

/// Initial data that are not exact solutions (the pattern changes in time).
struct InitialDatum {
    std::string formula;
    std::function<double(double, double)> value;
    /// The datum written as a single eigenmode object when it has that shape,
    /// so validation can report the violated constraint.
    std::optional<EigenmodeSolution> as_eigenmode;
    std::string not_exact_reason;

    PhysicalField sample(const GridSpec& grid) const { return PhysicalField::sample(grid, value); }
};

struct BuiltinSample {
    std::string name;
    std::string description;
    std::variant<Solution, InitialDatum> content;

    bool is_exact() const noexcept { return std::holds_alternative<Solution>(content); }
};

/// theta1, theta2, theta3 (exact; κ = α = 0.001 until rebound with
/// with_params) and the non-exact data con-1, con-2, con-3.
const std::vector<BuiltinSample>& builtin_samples();

/// Throws std::out_of_range for unknown names.
const BuiltinSample& builtin_sample(const std::string& name);

}  // namespace sqg
