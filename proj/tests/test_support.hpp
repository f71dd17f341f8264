#pragma once

// Shared helpers for the unit and acceptance suites: random generators for
// fields and exact solutions, and oracles that do not go through the spectral
// operators under test.

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "sqg/exact_solutions.hpp"
#include "sqg/field.hpp"

namespace sqg::testing {

inline PhysicalField random_field(const GridSpec& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> values(grid.size());
    for (auto& v : values) v = dist(rng);
    return PhysicalField(grid, std::move(values));
}

inline double max_abs_diff(const PhysicalField& a, const PhysicalField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    }
    return m;
}

/// Integer solutions (n, m, k) of n² + m² = k² with |n|, |m| ≤ 12, n·m ≠ 0.
inline std::vector<std::array<int, 3>> pythagorean_triples() {
    std::vector<std::array<int, 3>> out;
    for (int n = -12; n <= 12; ++n) {
        for (int m = -12; m <= 12; ++m) {
            if (n == 0 || m == 0) continue;
            const int k2 = n * n + m * m;
            const int k = static_cast<int>(std::lround(std::sqrt(k2)));
            if (k * k == k2 && k <= 15) out.push_back({n, m, k});
        }
    }
    return out;
}

/// A random valid eigenmode solution. Roughly a third of the draws use only
/// one of the two groups, where the constraint is vacuous.
inline EigenmodeSolution random_eigenmode(std::mt19937_64& rng, double kappa, double alpha) {
    static const auto triples = pythagorean_triples();
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(triples.size()) - 1);
    std::uniform_int_distribution<int> shape(0, 2);
    std::uniform_int_distribution<int> small(-6, 6);

    EigenmodeSolution s;
    s.kappa = kappa;
    s.alpha = alpha;
    const int kind = shape(rng);
    if (kind == 0) {
        const auto& t = triples[pick(rng)];
        s.n = t[0];
        s.m = t[1];
        s.k = t[2] * (coeff(rng) < 0 ? -1 : 1);
        for (auto& c : s.c) c = coeff(rng);
    } else if (kind == 1) {
        do {
            s.n = small(rng);
            s.m = small(rng);
        } while (s.n == 0 || s.m == 0);
        for (int i = 0; i < 4; ++i) s.c[i] = coeff(rng);
    } else {
        s.n = 1;
        s.m = 1;
        do s.k = small(rng); while (s.k == 0);
        for (int i = 4; i < 8; ++i) s.c[i] = coeff(rng);
    }
    return s;
}

/// A random valid unidirectional solution with 1–3 distinct nonzero k.
inline UnidirectionalSolution random_unidirectional(std::mt19937_64& rng, double kappa,
                                                    double alpha) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> dir(-3, 3);
    std::uniform_int_distribution<int> count(1, 3);
    UnidirectionalSolution s;
    s.kappa = kappa;
    s.alpha = alpha;
    do {
        s.n = dir(rng);
        s.m = dir(rng);
    } while (s.n == 0 && s.m == 0);
    const int modes = count(rng);
    for (int k = 1; k <= modes; ++k) {
        s.modes.push_back({coeff(rng) < 0 ? -k : k, coeff(rng), coeff(rng)});
    }
    return s;
}

/// Sixth-order central difference of f along x (dir = 0) or y (dir = 1).
inline double fd_derivative(const std::function<double(double, double)>& f, double x, double y,
                            int dir, double h = 1e-2) {
    auto at = [&](double s) { return dir == 0 ? f(x + s * h, y) : f(x, y + s * h); };
    return (45.0 * (at(1) - at(-1)) - 9.0 * (at(2) - at(-2)) + (at(3) - at(-3))) / (60.0 * h);
}

}  // namespace sqg::testing
