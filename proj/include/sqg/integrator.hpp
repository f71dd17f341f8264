#pragma once

#include <vector>

#include "sqg/field.hpp"

namespace sqg {

struct SolverParams {
    double kappa = 1e-3;
    double alpha = 1e-3;
    double dt = 1e-2;
    double t_end = 0.0;
    bool dealias = true;
    std::vector<double> snapshot_times;  // sorted, within [0, t_end]

    /// Throws DomainError on any out-of-range field.
    void validate() const;
};

/// Safety factor of the advective stability guard dt·max|u|·max|k| ≤ C.
inline constexpr double kCflLimit = 0.5;

/// Growth factor of the L∞ norm, relative to the initial state, treated as blowup.
inline constexpr double kBlowupFactor = 1e6;

struct Snapshot {
    double t = 0.0;
    PhysicalField field;
    double l2 = 0.0;
    double linf = 0.0;
    double mean = 0.0;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;  // strictly increasing t, one grid
};

/// One integrating-factor RK4 step of size `dt` for
/// θ_t = −κ(−Δ)^α θ − u·∇θ.
///
/// The dissipation is absorbed exactly by the diagonal factor
/// exp(−κ|k|^{2α}·s); RK4 is applied to the remaining advection. When the
/// advection vanishes, the step reduces to the exact linear decay.
/// Throws BlowupDetected if the result is non-finite or its L∞ norm exceeds
/// kBlowupFactor × `reference_linf` (the input's L∞ when negative).
SpectralField step(const SpectralField& state, const SolverParams& params, double dt,
                   double reference_linf = -1.0);
SpectralField step(const SpectralField& state, const SolverParams& params);

/// Largest stable time step under the advective guard for `state`.
double cfl_time_step(const SpectralField& state, bool dealias);

/// Integrates from t = 0 to t_end. The initial state and t_end are always
/// recorded; each snapshot time is hit exactly by shortening the step that
/// would cross it. Throws CflViolation when params.dt exceeds the guard at
/// the start or at a snapshot, and BlowupDetected with the failure time.
Trajectory simulate(const PhysicalField& initial, const SolverParams& params);

}  // namespace sqg
