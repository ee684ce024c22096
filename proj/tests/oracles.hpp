// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles: finite differences, dense eigensolves, random
// symplectic instances.  Everything here is independent of the library's
// computation paths it is used to check.

#ifndef HILL_TESTS_ORACLES_HPP
#define HILL_TESTS_ORACLES_HPP

#include <complex>
#include <random>
#include <vector>

#include "hill/types.hpp"

namespace oracle {

// Central finite difference of a scalar function of a 6-vector.
template <class F>
hill::Vec6 gradient_fd(F&& f, const hill::Vec6& x, double h = 1e-6) {
    hill::Vec6 g{};
    for (int i = 0; i < 6; ++i) {
        hill::Vec6 a = x, b = x;
        a[i] += h;
        b[i] -= h;
        g[i] = (f(a) - f(b)) / (2 * h);
    }
    return g;
}

// Central finite difference of a vector field's directional derivative.
template <class F>
hill::Vec6 directional_fd(F&& f, const hill::Vec6& x, const hill::Vec6& dir,
                          double h = 1e-6) {
    hill::Vec6 a = x, b = x;
    for (int i = 0; i < 6; ++i) {
        a[i] += h * dir[i];
        b[i] -= h * dir[i];
    }
    const hill::Vec6 fa = f(a), fb = f(b);
    hill::Vec6 out;
    for (int i = 0; i < 6; ++i) out[i] = (fa[i] - fb[i]) / (2 * h);
    return out;
}

// Eigenvalues of a real 4x4 matrix through the characteristic polynomial
// (Faddeev-LeVerrier) and a Durand-Kerner root solve; independent of any
// closed-form multiplier route in the library.
std::vector<std::complex<double>> eig4(const std::array<double, 16>& m);

// Random Sp^rho0(2) instance [[A,B],[C,A^T]] built from a random A and
// compatible symmetric B, C with A^2 - BC = I.
struct SpRho2 {
    hill::Mat2 A, B, C;
};
SpRho2 random_sp_rho2(std::mt19937_64& rng);

// Random invertible 2x2 with clamped condition number.
hill::Mat2 random_gl2(std::mt19937_64& rng);

}  // namespace oracle

#endif
