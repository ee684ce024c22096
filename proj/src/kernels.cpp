// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace hill::kernels {

PropState pack(const PhaseState& s, const Mat6& frame) {
    PropState y{};
    const Vec6 f = s.flat();
    for (int i = 0; i < 6; ++i) y.v[i] = f[i];
    y.v[6] = y.v[7] = 0.0;
    for (int j = 0; j < 6; ++j) {
        double* row = frame_row(y, j);
        for (int c = 0; c < 6; ++c) row[c] = frame[j * 6 + c];
        row[6] = row[7] = 0.0;
    }
    return y;
}

void unpack(const PropState& y, PhaseState& s, Mat6& frame) {
    s = PhaseState::from_flat({y.v[0], y.v[1], y.v[2], y.v[3], y.v[4], y.v[5]});
    for (int j = 0; j < 6; ++j) {
        const double* row = frame_row(y, j);
        for (int c = 0; c < 6; ++c) frame[j * 6 + c] = row[c];
    }
}

PropState pack_state(const PhaseState& s) {
    PropState y{};
    const Vec6 f = s.flat();
    for (int i = 0; i < 6; ++i) y.v[i] = f[i];
    return y;
}

PhaseState unpack_state(const PropState& y) {
    return PhaseState::from_flat({y.v[0], y.v[1], y.v[2], y.v[3], y.v[4], y.v[5]});
}

const KernelOps& active_kernels() {
    static const KernelOps* selected = [] {
        const char* env = std::getenv("HILL_KERNELS");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
            if (std::strcmp(env, "avx2") == 0 && avx2_available() &&
                avx2_kernels().combined_rhs != nullptr)
                return &avx2_kernels();
            return &scalar_kernels();
        }
        if (avx2_available() && avx2_kernels().combined_rhs != nullptr)
            return &avx2_kernels();
        return &scalar_kernels();
    }();
    return *selected;
}

std::vector<const KernelOps*> all_supported_kernels() {
    std::vector<const KernelOps*> out{&scalar_kernels()};
    if (avx2_available() && avx2_kernels().combined_rhs != nullptr)
        out.push_back(&avx2_kernels());
    return out;
}

}  // namespace hill::kernels
