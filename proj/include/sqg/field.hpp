#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace sqg {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform grid on the periodic square [0,2π)×[0,2π).
///
/// Node (i, j) sits at (2πi/nx, 2πj/ny). Wavenumber indices follow the FFT
/// layout: index i ↦ kx = i for i < nx/2 and i − nx otherwise, so kx ranges
/// over {−nx/2, …, nx/2 − 1}.
class GridSpec {
public:
    /// Throws DomainError unless both sizes are even and at least 4.
    GridSpec(int nx, int ny);
    explicit GridSpec(int n) : GridSpec(n, n) {}

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

    double x(int i) const noexcept { return kTwoPi * i / nx_; }
    double y(int j) const noexcept { return kTwoPi * j / ny_; }

    int kx(int i) const noexcept { return i < nx_ / 2 ? i : i - nx_; }
    int ky(int j) const noexcept { return j < ny_ / 2 ? j : j - ny_; }

    /// Storage index for a signed wavenumber pair, taken modulo the grid.
    std::size_t mode_index(int kx, int ky) const noexcept;
    std::size_t node_index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * nx_ + i;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int nx_;
    int ny_;
};

/// Real node values of a scalar field, row-major with j (y) outer.
class PhysicalField {
public:
    explicit PhysicalField(GridSpec grid);
    PhysicalField(GridSpec grid, std::vector<double> values);

    /// Samples `f(x, y)` at every node.
    static PhysicalField sample(GridSpec grid, const std::function<double(double, double)>& f);

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double& operator()(int i, int j) noexcept { return values_[grid_.node_index(i, j)]; }
    double operator()(int i, int j) const noexcept { return values_[grid_.node_index(i, j)]; }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// Fourier coefficients c_k with θ(x,y) = Σ c_k exp(i(kx·x + ky·y)).
///
/// The full coefficient set is stored (not the half-plane), laid out like the
/// node array: wavenumber index j outer, i inner.
class SpectralField {
public:
    explicit SpectralField(GridSpec grid);
    SpectralField(GridSpec grid, std::vector<Complex> coefficients);

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const Complex> coefficients() const noexcept { return coeffs_; }
    std::span<Complex> coefficients() noexcept { return coeffs_; }

    Complex& at(int kx, int ky) noexcept { return coeffs_[grid_.mode_index(kx, ky)]; }
    Complex at(int kx, int ky) const noexcept { return coeffs_[grid_.mode_index(kx, ky)]; }

    /// max |c(k) − conj(c(−k))| over all wavenumbers.
    double hermitian_defect() const noexcept;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s) noexcept;

private:
    GridSpec grid_;
    std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Norms. The L2 norm approximates (∫ f² dA)^{1/2} over the torus.
double linf_norm(const PhysicalField& f) noexcept;
double l2_norm(const PhysicalField& f) noexcept;
double mean(const PhysicalField& f) noexcept;

}  // namespace sqg
