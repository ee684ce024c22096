// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.
//
// Scalar reference kernels.  Loop bodies mirror the AVX2 variant operation
// for operation; the pad lanes (columns 6,7) are processed like real ones.

#include "hill/kernels.hpp"

namespace hill::kernels {

namespace {

bool combined_rhs_scalar(const double* y, double* dy, double floor2) {
    if (!detail::state_rhs(y, dy, floor2)) return false;
    dy[6] = 0.0;
    dy[7] = 0.0;

    double hv[9];
    detail::hessian_V(y, hv);

    const double* r0 = y + 8 + 0 * kWidth;
    const double* r1 = y + 8 + 1 * kWidth;
    const double* r2 = y + 8 + 2 * kWidth;
    const double* r3 = y + 8 + 3 * kWidth;
    const double* r4 = y + 8 + 4 * kWidth;
    const double* r5 = y + 8 + 5 * kWidth;
    double* d0 = dy + 8 + 0 * kWidth;
    double* d1 = dy + 8 + 1 * kWidth;
    double* d2 = dy + 8 + 2 * kWidth;
    double* d3 = dy + 8 + 3 * kWidth;
    double* d4 = dy + 8 + 4 * kWidth;
    double* d5 = dy + 8 + 5 * kWidth;

    for (int c = 0; c < kWidth; ++c) {
        double h0 = hv[0] * r0[c];
        h0 = h0 + hv[1] * r1[c];
        h0 = h0 + hv[2] * r2[c];
        double h1 = hv[3] * r0[c];
        h1 = h1 + hv[4] * r1[c];
        h1 = h1 + hv[5] * r2[c];
        double h2 = hv[6] * r0[c];
        h2 = h2 + hv[7] * r1[c];
        h2 = h2 + hv[8] * r2[c];

        const double u = r4[c] - r0[c];
        double w = 0.0 - r3[c];
        w = w - r1[c];

        d0[c] = r3[c] + r1[c];
        d1[c] = u;
        d2[c] = r5[c];
        d3[c] = u - h0;
        d4[c] = w - h1;
        d5[c] = 0.0 - h2;
    }
    return true;
}

void stage_scalar(const double* y0, const double* k, double coef, double* out) {
    for (int i = 0; i < kSize; ++i) out[i] = y0[i] + coef * k[i];
}

void combine_scalar(const double* y0, const double* k1, const double* k2,
                    const double* k3, const double* k4, double h6, double* out) {
    for (int i = 0; i < kSize; ++i) {
        double t = k1[i] + 2.0 * k2[i];
        t = t + 2.0 * k3[i];
        t = t + k4[i];
        out[i] = y0[i] + h6 * t;
    }
}

}  // namespace

const KernelOps& scalar_kernels() {
    static const KernelOps ops{"scalar", combined_rhs_scalar, stage_scalar,
                               combine_scalar};
    return ops;
}

}  // namespace hill::kernels
