#include "sqg/verification.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/spectral.hpp"

namespace sqg {
namespace {

void require_resolved(const Solution& sol, const GridSpec& grid) {
    const auto [kx, ky] = max_wavenumbers(sol);
    // Products of θ with itself reach 2·kmax; keep them below the Nyquist index.
    if (4 * kx >= grid.nx() || 4 * ky >= grid.ny()) {
        throw UnderResolved("grid " + std::to_string(grid.nx()) + "x" + std::to_string(grid.ny()) +
                            " cannot resolve wavenumbers (" + std::to_string(kx) + ", " +
                            std::to_string(ky) + ") with a 2x margin");
    }
}

PhysicalField sample_unchecked(const GridSpec& grid, double (*fn)(const Solution&, double, double, double),
                               const Solution& sol, double t) {
    PhysicalField out(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) out(i, j) = fn(sol, t, grid.x(i), grid.y(j));
    }
    return out;
}

}  // namespace

ResidualReport residual_unchecked(const Solution& sol, double t, const GridSpec& grid) {
    require_resolved(sol, grid);
    const SpectralField theta = forward_transform(sample_unchecked(grid, theta_at, sol, t));
    const SpectralField dtheta = forward_transform(sample_unchecked(grid, dtheta_dt_at, sol, t));

    const SpectralField advection = nonlinear_term(theta, false);
    SpectralField dissipation = fractional_laplacian(theta, alpha_of(sol));
    dissipation *= kappa_of(sol);

    const PhysicalField total = inverse_transform(dtheta + advection + dissipation);
    ResidualReport report;
    report.t = t;
    report.l_inf = linf_norm(total);
    report.l2 = l2_norm(total);
    report.nonlinear_linf = linf_norm(inverse_transform(advection));
    report.grid = grid;
    return report;
}

ResidualReport residual(const Solution& sol, double t, const GridSpec& grid) {
    require_valid(sol);
    return residual_unchecked(sol, t, grid);
}

ResidualReport residual(const Solution& sol, double t, const GridSpec& grid, double kappa,
                        double alpha) {
    return residual(with_params(sol, kappa, alpha), t, grid);
}

DecayFit decay_rate_fit(const Trajectory& traj, double expected_eigenvalue, double kappa,
                        double alpha) {
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 3) {
        throw DegenerateFit("decay fit needs at least 3 snapshots, got " +
                            std::to_string(snaps.size()));
    }
    DecayFit fit;
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (const auto& s : snaps) {
        if (!(s.l2 > 1e-300)) {
            throw DegenerateFit("L2 norm " + std::to_string(s.l2) + " at t = " +
                                std::to_string(s.t) + " is below the 1e-300 floor");
        }
        const double y = std::log(s.l2);
        st += s.t;
        sy += y;
        stt += s.t * s.t;
        sty += s.t * y;
        fit.sample_times.push_back(s.t);
    }
    const double count = static_cast<double>(snaps.size());
    const double denom = count * stt - st * st;
    if (!(denom > 0.0)) throw DegenerateFit("snapshot times do not span an interval");
    fit.fitted_rate = -(count * sty - st * sy) / denom;
    fit.expected_rate = kappa * std::pow(expected_eigenvalue, alpha);
    fit.relative_error = std::abs(fit.fitted_rate - fit.expected_rate) / std::abs(fit.expected_rate);
    return fit;
}

double pattern_correlation(const PhysicalField& a, const PhysicalField& b) {
    if (!(a.grid() == b.grid())) throw DomainError("pattern_correlation: grid mismatch");
    const double ma = mean(a), mb = mean(b);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    auto va = a.values();
    auto vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double da = va[i] - ma, db = vb[i] - mb;
        ab += da * db;
        aa += da * da;
        bb += db * db;
    }
    if (!(std::sqrt(aa) > 1e-300) || !(std::sqrt(bb) > 1e-300)) {
        throw ZeroField("pattern_correlation: mean-removed field has zero norm");
    }
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

double unidirectionality_check(const PhysicalField& f, int n, int m) {
    if (n == 0 && m == 0) throw DomainError("unidirectionality_check: direction (0, 0)");
    const SpectralField s = forward_transform(f);
    const GridSpec& g = s.grid();
    double total = 0.0, off = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const int kx = g.kx(i), ky = g.ky(j);
            const double e = std::norm(s.at(kx, ky));
            total += e;
            if (static_cast<long long>(kx) * m - static_cast<long long>(ky) * n != 0) off += e;
        }
    }
    if (!(total > 1e-300)) throw ZeroField("unidirectionality_check: zero field");
    return off / total;
}

std::vector<ErrorSample> solver_vs_exact(const Solution& sol, const SolverParams& params,
                                         const GridSpec& grid) {
    const Solution bound = with_params(sol, params.kappa, params.alpha);
    require_valid(bound);
    const Trajectory traj = simulate(eval_theta(bound, 0.0, grid), params);
    std::vector<ErrorSample> out;
    for (const auto& snap : traj.snapshots) {
        const PhysicalField exact = eval_theta(bound, snap.t, grid);
        PhysicalField diff(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            diff.values()[i] = snap.field.values()[i] - exact.values()[i];
        }
        const double ref = l2_norm(exact);
        out.push_back({snap.t, ref > 0.0 ? l2_norm(diff) / ref : l2_norm(diff)});
    }
    return out;
}

CheckResult make_check(std::string name, double t, double value, double tolerance,
                       std::string comparison) {
    bool pass = false;
    if (comparison == "<") {
        pass = value < tolerance;
    } else if (comparison == ">") {
        pass = value > tolerance;
    } else if (comparison == "abs1") {
        pass = std::abs(value - 1.0) < tolerance;
    } else {
        throw DomainError("unknown comparison '" + comparison + "'");
    }
    return {std::move(name), t, value, tolerance, std::move(comparison), pass};
}

std::string report_csv_header() { return "check,t,value,tolerance,comparison,pass"; }

std::string to_csv_row(const CheckResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%s,%d", r.name.c_str(), r.t, r.value,
                  r.tolerance, r.comparison.c_str(), r.pass ? 1 : 0);
    return buf;
}

}  // namespace sqg
