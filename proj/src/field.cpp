#include "sqg/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sqg/errors.hpp"

namespace sqg {

GridSpec::GridSpec(int nx, int ny) : nx_(nx), ny_(ny) {
    auto check = [](int n, const char* axis) {
        if (n < 4 || n % 2 != 0) {
            throw DomainError(std::string("grid size ") + axis + " = " + std::to_string(n) +
                              " must be even and >= 4");
        }
    };
    check(nx, "nx");
    check(ny, "ny");
}

std::size_t GridSpec::mode_index(int kx, int ky) const noexcept {
    int i = ((kx % nx_) + nx_) % nx_;
    int j = ((ky % ny_) + ny_) % ny_;
    return node_index(i, j);
}

PhysicalField::PhysicalField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}

PhysicalField::PhysicalField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw DomainError("physical field has " + std::to_string(values_.size()) +
                          " values, grid needs " + std::to_string(grid_.size()));
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("physical field contains non-finite values");
    }
}

PhysicalField PhysicalField::sample(GridSpec grid,
                                    const std::function<double(double, double)>& f) {
    PhysicalField out(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) out(i, j) = f(grid.x(i), grid.y(j));
    }
    return out;
}

SpectralField::SpectralField(GridSpec grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != grid_.size()) {
        throw DomainError("spectral field has " + std::to_string(coeffs_.size()) +
                          " coefficients, grid needs " + std::to_string(grid_.size()));
    }
}

double SpectralField::hermitian_defect() const noexcept {
    double defect = 0.0;
    for (int j = 0; j < grid_.ny(); ++j) {
        for (int i = 0; i < grid_.nx(); ++i) {
            const int kx = grid_.kx(i);
            const int ky = grid_.ky(j);
            defect = std::max(defect, std::abs(at(kx, ky) - std::conj(at(-kx, -ky))));
        }
    }
    return defect;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (!(grid_ == other.grid_)) throw DomainError("grid mismatch in spectral addition");
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    if (!(grid_ == other.grid_)) throw DomainError("grid mismatch in spectral subtraction");
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other.coeffs_[n];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double linf_norm(const PhysicalField& f) noexcept {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const PhysicalField& f) noexcept {
    double sum = 0.0;
    for (double v : f.values()) sum += v * v;
    const double cell = kTwoPi * kTwoPi / static_cast<double>(f.grid().size());
    return std::sqrt(sum * cell);
}

double mean(const PhysicalField& f) noexcept {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum / static_cast<double>(f.grid().size());
}

}  // namespace sqg
