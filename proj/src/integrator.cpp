#include "sqg/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/spectral.hpp"

namespace sqg {
namespace {

// Diagonal integrating factors exp(−κ|k|^{2α}·h) for h = dt/2 and h = dt.
class Stepper {
public:
    Stepper(const GridSpec& grid, const SolverParams& params, double dt)
        : params_(params), dt_(dt), half_(grid.size()), full_(grid.size()) {
        for (int j = 0; j < grid.ny(); ++j) {
            const int ky = grid.ky(j);
            for (int i = 0; i < grid.nx(); ++i) {
                const int kx = grid.kx(i);
                const double rate =
                    params.kappa * std::pow(static_cast<double>(kx * kx + ky * ky), params.alpha);
                const std::size_t idx = grid.node_index(i, j);
                half_[idx] = std::exp(-rate * 0.5 * dt);
                full_[idx] = std::exp(-rate * dt);
            }
        }
    }

    SpectralField advance(const SpectralField& state) const {
        const GridSpec& g = state.grid();
        const std::size_t n = g.size();

        // k_i = dt·N(stage), N(θ) = −u·∇θ
        auto tendency = [&](const SpectralField& s) {
            SpectralField k = nonlinear_term(s, params_.dealias);
            k *= -dt_;
            return k;
        };

        auto in = state.coefficients();
        const SpectralField k1 = tendency(state);

        SpectralField stage(g);
        auto st = stage.coefficients();
        auto c1 = k1.coefficients();
        for (std::size_t i = 0; i < n; ++i) st[i] = half_[i] * (in[i] + 0.5 * c1[i]);
        const SpectralField k2 = tendency(stage);

        auto c2 = k2.coefficients();
        for (std::size_t i = 0; i < n; ++i) st[i] = half_[i] * in[i] + 0.5 * c2[i];
        const SpectralField k3 = tendency(stage);

        auto c3 = k3.coefficients();
        for (std::size_t i = 0; i < n; ++i) st[i] = full_[i] * in[i] + half_[i] * c3[i];
        const SpectralField k4 = tendency(stage);

        auto c4 = k4.coefficients();
        SpectralField out(g);
        auto dst = out.coefficients();
        for (std::size_t i = 0; i < n; ++i) {
            dst[i] = full_[i] * in[i] +
                     (full_[i] * c1[i] + 2.0 * half_[i] * (c2[i] + c3[i]) + c4[i]) / 6.0;
        }
        return out;
    }

    double dt() const noexcept { return dt_; }

private:
    SolverParams params_;
    double dt_;
    std::vector<double> half_;
    std::vector<double> full_;
};

void check_blowup(const SpectralField& s, double reference_linf, double t) {
    double bound = 0.0;
    for (Complex c : s.coefficients()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw BlowupDetected("non-finite coefficient at t = " + std::to_string(t), t);
        }
        bound += std::abs(c.real()) + std::abs(c.imag());
    }
    if (reference_linf <= 0.0) return;
    const double limit = kBlowupFactor * reference_linf;
    // Σ(|Re c| + |Im c|) bounds the L∞ norm; transform only when it is inconclusive.
    if (bound > limit && linf_norm(inverse_transform(s)) > limit) {
        throw BlowupDetected("L-infinity norm exceeded " + std::to_string(kBlowupFactor) +
                                 "x its initial value at t = " + std::to_string(t),
                             t);
    }
}

void check_cfl(const SpectralField& s, const SolverParams& params, double t) {
    const double limit = cfl_time_step(s, params.dealias);
    if (params.dt > limit) {
        throw CflViolation("dt = " + std::to_string(params.dt) + " exceeds the stability limit " +
                               std::to_string(limit) + " at t = " + std::to_string(t),
                           t);
    }
}

Snapshot make_snapshot(double t, const SpectralField& state) {
    PhysicalField f = inverse_transform(state);
    Snapshot snap{t, f, l2_norm(f), linf_norm(f), mean(f)};
    return snap;
}

}  // namespace

void SolverParams::validate() const {
    auto fail = [](const std::string& msg) { throw DomainError("solver parameters: " + msg); };
    if (!(kappa > 0.0) || !std::isfinite(kappa)) fail("kappa must be > 0");
    if (!(alpha >= 0.0 && alpha < 1.0)) fail("alpha must lie in [0, 1)");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be >= 0");
    if (t_end > 0.0 && dt > t_end) fail("dt must not exceed t_end");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
        fail("snapshot_times must be sorted");
    }
    for (double t : snapshot_times) {
        if (!(t >= 0.0 && t <= t_end)) fail("snapshot time " + std::to_string(t) + " outside [0, t_end]");
    }
}

double cfl_time_step(const SpectralField& state, bool dealias) {
    const GridSpec& g = state.grid();
    auto [u_hat, v_hat] = velocity_from_theta(state);
    const PhysicalField u = inverse_transform(u_hat);
    const PhysicalField v = inverse_transform(v_hat);
    double speed = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = u.values()[i], b = v.values()[i];
        speed = std::max(speed, a * a + b * b);
    }
    speed = std::sqrt(speed);
    const int kmax = dealias ? std::max(g.nx() / 3, g.ny() / 3) : std::max(g.nx(), g.ny()) / 2;
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return kCflLimit / (speed * kmax);
}

SpectralField step(const SpectralField& state, const SolverParams& params, double dt,
                   double reference_linf) {
    if (!(dt > 0.0)) throw DomainError("step size must be > 0");
    if (reference_linf < 0.0) reference_linf = linf_norm(inverse_transform(state));
    SpectralField next = Stepper(state.grid(), params, dt).advance(state);
    check_blowup(next, reference_linf, dt);
    return next;
}

SpectralField step(const SpectralField& state, const SolverParams& params) {
    return step(state, params, params.dt);
}

Trajectory simulate(const PhysicalField& initial, const SolverParams& params) {
    params.validate();
    const GridSpec& grid = initial.grid();
    SpectralField state = forward_transform(initial);
    const double reference = linf_norm(initial);

    Trajectory traj;
    traj.snapshots.push_back(make_snapshot(0.0, state));
    if (params.t_end == 0.0) return traj;
    check_cfl(state, params, 0.0);

    std::vector<double> targets;
    for (double t : params.snapshot_times) {
        if (t > 0.0) targets.push_back(t);
    }
    targets.push_back(params.t_end);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    const Stepper regular(grid, params, params.dt);
    double t = 0.0;
    for (double target : targets) {
        while (t < target) {
            const double remaining = target - t;
            if (remaining <= params.dt * (1.0 + 1e-9)) {
                state = remaining == params.dt ? regular.advance(state)
                                               : Stepper(grid, params, remaining).advance(state);
                t = target;
            } else {
                state = regular.advance(state);
                t += params.dt;
            }
            check_blowup(state, reference, t);
        }
        traj.snapshots.push_back(make_snapshot(target, state));
        if (target < params.t_end) check_cfl(state, params, target);
    }
    return traj;
}

}  // namespace sqg
