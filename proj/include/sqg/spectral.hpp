#pragma once

#include <utility>

#include "sqg/field.hpp"

namespace sqg {

/// Real field to Fourier coefficients; the 1/(nx·ny) factor is applied here,
/// so sin(x) maps to c(1,0) = −i/2, c(−1,0) = +i/2.
SpectralField forward_transform(const PhysicalField& f);

/// Fourier coefficients back to node values. The input is symmetrized before
/// transforming; throws SymmetryViolation when the Hermitian defect exceeds
/// 1e-8 relative to max(1, max|c|).
PhysicalField inverse_transform(const SpectralField& s);

/// Multiplies each coefficient by (kx² + ky²)^alpha. The zero mode gets 0 for
/// alpha > 0 and 1 for alpha = 0, so (−Δ)^0 is the identity.
SpectralField fractional_laplacian(const SpectralField& s, double alpha);

/// Multiplies each coefficient by (kx² + ky²)^(−1/2), zero mode mapped to 0.
SpectralField inv_sqrt_laplacian(const SpectralField& s);

/// Velocity (u, v) = (∂y ψ, −∂x ψ) with ψ = (−Δ)^{−1/2} θ.
///
/// Odd derivatives drop the Nyquist wavenumber (its i·k multiplier would break
/// Hermitian symmetry); the divergence ∂x u + ∂y v is zero mode-by-mode.
std::pair<SpectralField, SpectralField> velocity_from_theta(const SpectralField& s);

/// Pseudo-spectral u·∇θ. With `dealias`, modes with 3|kx| > nx or 3|ky| > ny
/// are removed from θ before the products and from the result.
SpectralField nonlinear_term(const SpectralField& s, bool dealias);

/// Spectral ∂x and ∂y (Nyquist dropped).
SpectralField derivative_x(const SpectralField& s);
SpectralField derivative_y(const SpectralField& s);

/// Spectral divergence i·kx·u + i·ky·v, coefficient by coefficient.
SpectralField divergence(const SpectralField& u, const SpectralField& v);

/// Zeroes modes outside the 2/3-rule band.
void apply_dealias(SpectralField& s) noexcept;

/// Whether (kx, ky) survives the 2/3 rule on `grid`.
bool retained_by_dealias(const GridSpec& grid, int kx, int ky) noexcept;

}  // namespace sqg
