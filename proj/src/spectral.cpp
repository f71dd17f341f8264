#include "sqg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <string>
#include <utility>

#include "sqg/errors.hpp"

namespace sqg {
namespace {

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are built once per grid shape with FFTW_UNALIGNED so they can run on
// any std::vector buffer.
class PlanPair {
public:
    explicit PlanPair(const GridSpec& grid) {
        std::vector<Complex> scratch(grid.size());
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_2d(grid.ny(), grid.nx(), buf, buf, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_2d(grid.ny(), grid.nx(), buf, buf, FFTW_BACKWARD, flags);
    }
    ~PlanPair() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;

    void forward(std::vector<Complex>& data) const {
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(forward_, buf, buf);
    }
    void backward(std::vector<Complex>& data) const {
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(backward_, buf, buf);
    }

private:
    fftw_plan forward_;
    fftw_plan backward_;
};

const PlanPair& plans_for(const GridSpec& grid) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{grid.nx(), grid.ny()}];
    if (!slot) slot = std::make_unique<PlanPair>(grid);
    return *slot;
}

// Wavenumber used by odd-order derivatives: the Nyquist index has no partner.
int odd_wavenumber(int k, int n) noexcept { return k == -n / 2 ? 0 : k; }

// Rounds x to 53 − bits significant bits (Veltkamp split). Multiplying the
// result by an integer of magnitude below 2^bits is then exact, so the mixed
// products kx·(ky·ψ) and ky·(kx·ψ) round identically and the velocity
// divergence cancels exactly.
double drop_low_bits(double x, double splitter) noexcept {
    const double gamma = x * splitter;
    return gamma - (gamma - x);
}

double splitter_for(const GridSpec& g) noexcept {
    const int bits = std::bit_width(static_cast<unsigned>(std::max(g.nx(), g.ny()) / 2));
    return std::ldexp(1.0, bits) + 1.0;
}

// 64-byte aligned storage so the half-spectrum plans can use SIMD codelets.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{64}));
    }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{64}); }
    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

// Real-to-complex plans and per-mode tables on the half spectrum
// (kx index 0..nx/2, all ky), used by the nonlinear term.
class HalfSpectrum {
public:
    explicit HalfSpectrum(const GridSpec& grid)
        : grid_(grid), nh_(grid.nx() / 2 + 1), splitter_(splitter_for(grid)) {
        const std::size_t count = static_cast<std::size_t>(grid.ny()) * nh_;
        kx_.resize(count);
        ky_.resize(count);
        inv_k_.resize(count);
        keep_.resize(count);
        for (int j = 0; j < grid.ny(); ++j) {
            for (int i = 0; i < nh_; ++i) {
                const std::size_t h = static_cast<std::size_t>(j) * nh_ + i;
                const int kx = grid.kx(i), ky = grid.ky(j);
                kx_[h] = odd_wavenumber(kx, grid.nx());
                ky_[h] = odd_wavenumber(ky, grid.ny());
                const int k2 = kx * kx + ky * ky;
                inv_k_[h] = k2 == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(k2));
                keep_[h] = retained_by_dealias(grid, kx, ky);
            }
        }
        AlignedVector<double> real(grid.size());
        AlignedVector<Complex> half(count);
        auto* hbuf = reinterpret_cast<fftw_complex*>(half.data());
        const unsigned flags = FFTW_ESTIMATE;
        r2c_ = fftw_plan_dft_r2c_2d(grid.ny(), grid.nx(), real.data(), hbuf, flags);
        c2r_ = fftw_plan_dft_c2r_2d(grid.ny(), grid.nx(), hbuf, real.data(), flags);
    }
    ~HalfSpectrum() {
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
    }
    HalfSpectrum(const HalfSpectrum&) = delete;
    HalfSpectrum& operator=(const HalfSpectrum&) = delete;

    SpectralField advection(const SpectralField& s, bool dealias) const {
        const int nx = grid_.nx(), ny = grid_.ny();
        const std::size_t count = static_cast<std::size_t>(ny) * nh_;
        AlignedVector<Complex> u(count), v(count), tx(count), ty(count);
        auto in = s.coefficients();
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nh_; ++i) {
                const std::size_t h = static_cast<std::size_t>(j) * nh_ + i;
                Complex c = in[grid_.node_index(i, j)];
                if (dealias && !keep_[h]) c = 0.0;
                const double pr = drop_low_bits(c.real() * inv_k_[h], splitter_);
                const double pi = drop_low_bits(c.imag() * inv_k_[h], splitter_);
                const double kx = kx_[h], ky = ky_[h];
                u[h] = Complex(-ky * pi, ky * pr);
                v[h] = Complex(kx * pi, -kx * pr);
                tx[h] = Complex(-kx * c.imag(), kx * c.real());
                ty[h] = Complex(-ky * c.imag(), ky * c.real());
            }
        }
        AlignedVector<double> ur(grid_.size()), vr(grid_.size()), txr(grid_.size()), tyr(grid_.size());
        to_real(u, ur);
        to_real(v, vr);
        to_real(tx, txr);
        to_real(ty, tyr);
        for (std::size_t n = 0; n < ur.size(); ++n) ur[n] = ur[n] * txr[n] + vr[n] * tyr[n];

        fftw_execute_dft_r2c(r2c_, ur.data(), reinterpret_cast<fftw_complex*>(u.data()));
        const double scale = 1.0 / static_cast<double>(grid_.size());
        SpectralField out(grid_);
        auto dst = out.coefficients();
        for (int j = 0; j < ny; ++j) {
            const int jm = (ny - j) % ny;
            for (int i = 0; i < nx; ++i) {
                Complex c = i < nh_ ? u[static_cast<std::size_t>(j) * nh_ + i]
                                    : std::conj(u[static_cast<std::size_t>(jm) * nh_ + (nx - i)]);
                c *= scale;
                if (dealias && !retained_by_dealias(grid_, grid_.kx(i), grid_.ky(j))) c = 0.0;
                dst[grid_.node_index(i, j)] = c;
            }
        }
        return out;
    }

private:
    // c2r overwrites its input; callers pass scratch spectra.
    void to_real(AlignedVector<Complex>& half, AlignedVector<double>& real) const {
        fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(half.data()), real.data());
    }

    GridSpec grid_;
    int nh_;
    double splitter_;
    std::vector<double> kx_, ky_, inv_k_;
    std::vector<char> keep_;
    fftw_plan r2c_;
    fftw_plan c2r_;
};

const HalfSpectrum& half_spectrum_for(const GridSpec& grid) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<HalfSpectrum>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{grid.nx(), grid.ny()}];
    if (!slot) slot = std::make_unique<HalfSpectrum>(grid);
    return *slot;
}

// sign·i·k·c with k the x or y wavenumber; written out so that each component
// is a single product.
SpectralField derivative(const SpectralField& s, bool along_x, double sign) {
    const GridSpec& g = s.grid();
    SpectralField out(g);
    auto in = s.coefficients();
    auto dst = out.coefficients();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const int k = along_x ? odd_wavenumber(g.kx(i), g.nx()) : odd_wavenumber(g.ky(j), g.ny());
            const double w = sign * k;
            const std::size_t idx = g.node_index(i, j);
            dst[idx] = Complex(-w * in[idx].imag(), w * in[idx].real());
        }
    }
    return out;
}

template <typename Multiplier>
SpectralField apply_multiplier(const SpectralField& s, Multiplier&& mult) {
    const GridSpec& g = s.grid();
    SpectralField out(g);
    auto in = s.coefficients();
    auto dst = out.coefficients();
    for (int j = 0; j < g.ny(); ++j) {
        const int ky = g.ky(j);
        for (int i = 0; i < g.nx(); ++i) {
            const std::size_t idx = g.node_index(i, j);
            dst[idx] = mult(g.kx(i), ky) * in[idx];
        }
    }
    return out;
}

PhysicalField to_physical_unchecked(const SpectralField& s) {
    std::vector<Complex> data(s.coefficients().begin(), s.coefficients().end());
    plans_for(s.grid()).backward(data);
    std::vector<double> values(data.size());
    std::transform(data.begin(), data.end(), values.begin(), [](Complex c) { return c.real(); });
    PhysicalField out(s.grid());
    std::copy(values.begin(), values.end(), out.values().begin());
    return out;
}

}  // namespace

SpectralField forward_transform(const PhysicalField& f) {
    const GridSpec& g = f.grid();
    std::vector<Complex> data(f.values().begin(), f.values().end());
    plans_for(g).forward(data);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& c : data) c *= scale;
    return SpectralField(g, std::move(data));
}

PhysicalField inverse_transform(const SpectralField& s) {
    const GridSpec& g = s.grid();
    double cmax = 0.0;
    for (Complex c : s.coefficients()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw SymmetryViolation("spectral field contains non-finite coefficients");
        }
        cmax = std::max(cmax, std::abs(c));
    }
    const double defect = s.hermitian_defect();
    if (defect > 1e-8 * std::max(1.0, cmax)) {
        throw SymmetryViolation("Hermitian symmetry defect " + std::to_string(defect) +
                                " exceeds tolerance");
    }
    SpectralField sym(g);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const int kx = g.kx(i);
            const int ky = g.ky(j);
            sym.at(kx, ky) = 0.5 * (s.at(kx, ky) + std::conj(s.at(-kx, -ky)));
        }
    }
    return to_physical_unchecked(sym);
}

SpectralField fractional_laplacian(const SpectralField& s, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("alpha = " + std::to_string(alpha) + " outside [0, 1)");
    }
    // std::pow(0, 0) == 1 and std::pow(0, a > 0) == 0 give the zero-mode convention.
    return apply_multiplier(s, [alpha](int kx, int ky) {
        return std::pow(static_cast<double>(kx * kx + ky * ky), alpha);
    });
}

SpectralField inv_sqrt_laplacian(const SpectralField& s) {
    return apply_multiplier(s, [](int kx, int ky) {
        const int k2 = kx * kx + ky * ky;
        return k2 == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(k2));
    });
}

SpectralField derivative_x(const SpectralField& s) { return derivative(s, true, 1.0); }

SpectralField derivative_y(const SpectralField& s) { return derivative(s, false, 1.0); }

std::pair<SpectralField, SpectralField> velocity_from_theta(const SpectralField& s) {
    SpectralField psi = inv_sqrt_laplacian(s);
    const double splitter = splitter_for(psi.grid());
    for (auto& c : psi.coefficients()) {
        c = Complex(drop_low_bits(c.real(), splitter), drop_low_bits(c.imag(), splitter));
    }
    return {derivative(psi, false, 1.0), derivative(psi, true, -1.0)};
}

SpectralField divergence(const SpectralField& u, const SpectralField& v) {
    return derivative_x(u) + derivative_y(v);
}

bool retained_by_dealias(const GridSpec& grid, int kx, int ky) noexcept {
    return 3 * std::abs(kx) <= grid.nx() && 3 * std::abs(ky) <= grid.ny();
}

void apply_dealias(SpectralField& s) noexcept {
    const GridSpec& g = s.grid();
    auto c = s.coefficients();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (!retained_by_dealias(g, g.kx(i), g.ky(j))) c[g.node_index(i, j)] = 0.0;
        }
    }
}

SpectralField nonlinear_term(const SpectralField& s, bool dealias) {
    return half_spectrum_for(s.grid()).advection(s, dealias);
}

}  // namespace sqg
