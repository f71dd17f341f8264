#pragma once

#include <string>
#include <vector>

#include "sqg/exact_solutions.hpp"
#include "sqg/field.hpp"
#include "sqg/integrator.hpp"

namespace sqg {

/// Norms of ∂tθ + u·∇θ + κ(−Δ)^α θ at one time.
struct ResidualReport {
    double t = 0.0;
    double l_inf = 0.0;
    double l2 = 0.0;
    double nonlinear_linf = 0.0;  // |u·∇θ|∞ alone
    GridSpec grid{4};
};

/// Residual of the PDE for `sol`, with ∂tθ taken from the closed form and the
/// spatial operators applied spectrally (no dealiasing, so the advection of a
/// non-exact θ is reported in full).
///
/// Requires the grid to hold twice the solution's largest wavenumber below
/// the Nyquist index on each axis (throws UnderResolved), and a valid
/// solution (throws InvalidSolution).
ResidualReport residual(const Solution& sol, double t, const GridSpec& grid);
ResidualReport residual(const Solution& sol, double t, const GridSpec& grid, double kappa,
                        double alpha);

/// Residual of an arbitrary candidate, skipping validation. Used to measure
/// how far a constraint-breaking eigenmode object is from solving the PDE.
ResidualReport residual_unchecked(const Solution& sol, double t, const GridSpec& grid);

struct DecayFit {
    double fitted_rate = 0.0;
    double expected_rate = 0.0;  // κ·E^α
    double relative_error = 0.0;
    std::vector<double> sample_times;
};

/// Least-squares slope of log‖θ(t)‖₂ against t over the trajectory's
/// snapshots, compared with κ·expected_eigenvalue^α. Throws DegenerateFit
/// for fewer than three snapshots or norms below 1e-300.
DecayFit decay_rate_fit(const Trajectory& traj, double expected_eigenvalue, double kappa,
                        double alpha);

/// Inner product of the mean-removed, unit-normalized fields. Throws
/// ZeroField if either mean-removed norm is below 1e-300.
double pattern_correlation(const PhysicalField& a, const PhysicalField& b);

/// Fraction of spectral energy carried by wavevectors not parallel to (n, m);
/// the zero vector counts as parallel.
double unidirectionality_check(const PhysicalField& f, int n, int m);

struct ErrorSample {
    double t = 0.0;
    double relative_l2 = 0.0;
};

/// Simulates from the exact initial state and reports ‖θ_num − θ_exact‖₂ /
/// ‖θ_exact‖₂ at each snapshot. params.kappa/alpha override the solution's.
std::vector<ErrorSample> solver_vs_exact(const Solution& sol, const SolverParams& params,
                                         const GridSpec& grid);

/// One line of a verification report.
struct CheckResult {
    std::string name;
    double t = 0.0;
    double value = 0.0;
    double tolerance = 0.0;
    std::string comparison;  // "<", ">", "abs1" (|value − 1| < tolerance)
    bool pass = false;
};

CheckResult make_check(std::string name, double t, double value, double tolerance,
                       std::string comparison);

/// CSV column order: check,t,value,tolerance,comparison,pass
std::string report_csv_header();
std::string to_csv_row(const CheckResult& r);

}  // namespace sqg
