// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.
//
// Inner-loop kernels for the combined state + variational flow.  The packed
// layout keeps the six tangent-frame columns in SIMD lanes: row j of the
// frame (component j of all six columns) lives in an 8-wide slot so one row
// is exactly two 256-bit vectors.  A scalar reference implementation and an
// AVX2 implementation are selected at runtime; both perform the same IEEE
// operations in the same order, so results are bit-identical.

#ifndef HILL_KERNELS_HPP
#define HILL_KERNELS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "hill/types.hpp"

namespace hill::kernels {

inline constexpr int kWidth = 8;   // frame row stride (6 columns + 2 pad)
inline constexpr int kSize = 56;   // 6 state + 2 pad + 6*8 frame

struct alignas(32) PropState {
    double v[kSize];
};

inline double* frame_row(PropState& y, int j) { return y.v + 8 + j * kWidth; }
inline const double* frame_row(const PropState& y, int j) { return y.v + 8 + j * kWidth; }

PropState pack(const PhaseState& s, const Mat6& frame);
void unpack(const PropState& y, PhaseState& s, Mat6& frame);
PropState pack_state(const PhaseState& s);   // identity frame columns zeroed
PhaseState unpack_state(const PropState& y);

struct KernelOps {
    const char* name;
    // dy := f(y); returns false when |q|^2 < floor2 (collision).
    bool (*combined_rhs)(const double* y, double* dy, double floor2);
    // out := y0 + coef * k (elementwise over the packed block)
    void (*stage)(const double* y0, const double* k, double coef, double* out);
    // out := y0 + h6 * (k1 + 2 k2 + 2 k3 + k4)
    void (*combine)(const double* y0, const double* k1, const double* k2,
                    const double* k3, const double* k4, double h6, double* out);
};

const KernelOps& scalar_kernels();
const KernelOps& avx2_kernels();   // null ops if unsupported at build time
bool avx2_available();

// Active variant: HILL_KERNELS=scalar|avx2 overrides the CPUID default.
const KernelOps& active_kernels();
std::vector<const KernelOps*> all_supported_kernels();

namespace detail {

// Shared elementary pieces; inlined into both variants so the state part of
// the flow is bit-identical across scalar, AVX2 and the state-only stepper.
inline bool state_rhs(const double* s, double* ds, double floor2) {
    const double q0 = s[0], q1 = s[1], q2 = s[2];
    const double p0 = s[3], p1 = s[4], p2 = s[5];
    const double r2 = q0 * q0 + q1 * q1 + q2 * q2;
    if (!(r2 >= floor2)) return false;
    const double r = std::sqrt(r2);
    const double inv_r3 = 1.0 / (r2 * r);
    const double dV0 = q0 * inv_r3 - 3.0 * q0;
    const double dV1 = q1 * inv_r3;
    const double dV2 = q2 * inv_r3 + q2;
    ds[0] = p0 + q1;
    ds[1] = p1 - q0;
    ds[2] = p2;
    ds[3] = p1 - q0 - dV0;
    ds[4] = -p0 - q1 - dV1;
    ds[5] = -dV2;
    return true;
}

inline void hessian_V(const double* q, double* hv) {
    const double r2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
    const double r = std::sqrt(r2);
    const double inv_r3 = 1.0 / (r2 * r);
    const double inv_r5 = inv_r3 / r2;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = -3.0 * q[i] * q[j] * inv_r5;
            if (i == j) v += inv_r3;
            hv[i * 3 + j] = v;
        }
    hv[0] -= 3.0;
    hv[8] += 1.0;
}

}  // namespace detail

}  // namespace hill::kernels

#endif
