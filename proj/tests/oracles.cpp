// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>

namespace oracle {

std::vector<std::complex<double>> eig4(const std::array<double, 16>& m) {
    // Faddeev-LeVerrier: char poly lambda^4 + c3 l^3 + c2 l^2 + c1 l + c0
    auto mul = [](const std::array<double, 16>& a, const std::array<double, 16>& b) {
        std::array<double, 16> r{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int k = 0; k < 4; ++k) s += a[i * 4 + k] * b[k * 4 + j];
                r[i * 4 + j] = s;
            }
        return r;
    };
    auto tr = [](const std::array<double, 16>& a) {
        return a[0] + a[5] + a[10] + a[15];
    };
    std::array<double, 16> M = m;
    double c[5] = {1, 0, 0, 0, 0};
    std::array<double, 16> Mk = m;
    c[1] = -tr(Mk);
    for (int k = 2; k <= 4; ++k) {
        std::array<double, 16> shifted = Mk;
        for (int i = 0; i < 4; ++i) shifted[i * 4 + i] += c[k - 1];
        Mk = mul(M, shifted);
        c[k] = -tr(Mk) / k;
    }

    // Durand-Kerner on z^4 + c1 z^3 + c2 z^2 + c3 z + c4 (relabelled)
    auto poly = [&](std::complex<double> z) {
        return (((z + c[1]) * z + c[2]) * z + c[3]) * z + c[4];
    };
    std::vector<std::complex<double>> r = {{0.4, 0.9}, {-0.8, 0.6}, {1.3, -0.5}, {-0.3, -1.1}};
    for (int it = 0; it < 300; ++it) {
        double worst = 0;
        for (int i = 0; i < 4; ++i) {
            std::complex<double> denom = 1;
            for (int j = 0; j < 4; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            const std::complex<double> delta = poly(r[i]) / denom;
            r[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-14) break;
    }
    return r;
}

hill::Mat2 random_gl2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    while (true) {
        hill::Mat2 r{u(rng), u(rng), u(rng), u(rng)};
        const double d = hill::det2(r);
        if (std::abs(d) > 0.05) return r;
    }
}

SpRho2 random_sp_rho2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> mag(0.2, 2.0);
    std::bernoulli_distribution coin;

    // two Sp^rho0(1) blocks, then a Lagrangian basis change
    double a[2], b[2], c[2];
    for (int i = 0; i < 2; ++i) {
        if (coin(rng)) a[i] = u(rng) * 0.95;           // elliptic
        else a[i] = (coin(rng) ? 1 : -1) * (1.0 + mag(rng));  // hyperbolic
        b[i] = (coin(rng) ? 1 : -1) * mag(rng);
        c[i] = (a[i] * a[i] - 1.0) / b[i];
    }
    const hill::Mat2 A0{a[0], 0, 0, a[1]};
    const hill::Mat2 B0{b[0], 0, 0, b[1]};
    const hill::Mat2 C0{c[0], 0, 0, c[1]};

    const hill::Mat2 R = random_gl2(rng);
    const double det = hill::det2(R);
    const hill::Mat2 Rinv{R[3] / det, -R[1] / det, -R[2] / det, R[0] / det};
    const hill::Mat2 Rt = hill::transpose2(R);
    const hill::Mat2 Rinvt = hill::transpose2(Rinv);

    SpRho2 out;
    out.A = hill::mul2(hill::mul2(R, A0), Rinv);
    out.B = hill::mul2(hill::mul2(R, B0), Rt);
    out.C = hill::mul2(hill::mul2(Rinvt, C0), Rinv);
    return out;
}

}  // namespace oracle
