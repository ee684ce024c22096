// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.
//
// AVX2 kernels.  Frame columns sit in lanes (one row = two 256-bit vectors).
// Plain mul/add only, no FMA: lane arithmetic matches the scalar reference
// bit for bit.

#include "hill/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define HILL_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#endif

namespace hill::kernels {

#ifdef HILL_HAVE_AVX2_BUILD

namespace {

__attribute__((target("avx2"))) bool combined_rhs_avx2(const double* y,
                                                       double* dy,
                                                       double floor2) {
    if (!detail::state_rhs(y, dy, floor2)) return false;
    dy[6] = 0.0;
    dy[7] = 0.0;

    double hv[9];
    detail::hessian_V(y, hv);

    const double* base = y + 8;
    double* dbase = dy + 8;
    const __m256d zero = _mm256_setzero_pd();

    for (int half = 0; half < 2; ++half) {
        const int off = half * 4;
        const __m256d r0 = _mm256_load_pd(base + 0 * kWidth + off);
        const __m256d r1 = _mm256_load_pd(base + 1 * kWidth + off);
        const __m256d r2 = _mm256_load_pd(base + 2 * kWidth + off);
        const __m256d r3 = _mm256_load_pd(base + 3 * kWidth + off);
        const __m256d r4 = _mm256_load_pd(base + 4 * kWidth + off);
        const __m256d r5 = _mm256_load_pd(base + 5 * kWidth + off);

        __m256d h0 = _mm256_mul_pd(_mm256_set1_pd(hv[0]), r0);
        h0 = _mm256_add_pd(h0, _mm256_mul_pd(_mm256_set1_pd(hv[1]), r1));
        h0 = _mm256_add_pd(h0, _mm256_mul_pd(_mm256_set1_pd(hv[2]), r2));
        __m256d h1 = _mm256_mul_pd(_mm256_set1_pd(hv[3]), r0);
        h1 = _mm256_add_pd(h1, _mm256_mul_pd(_mm256_set1_pd(hv[4]), r1));
        h1 = _mm256_add_pd(h1, _mm256_mul_pd(_mm256_set1_pd(hv[5]), r2));
        __m256d h2 = _mm256_mul_pd(_mm256_set1_pd(hv[6]), r0);
        h2 = _mm256_add_pd(h2, _mm256_mul_pd(_mm256_set1_pd(hv[7]), r1));
        h2 = _mm256_add_pd(h2, _mm256_mul_pd(_mm256_set1_pd(hv[8]), r2));

        const __m256d u = _mm256_sub_pd(r4, r0);
        __m256d w = _mm256_sub_pd(zero, r3);
        w = _mm256_sub_pd(w, r1);

        _mm256_store_pd(dbase + 0 * kWidth + off, _mm256_add_pd(r3, r1));
        _mm256_store_pd(dbase + 1 * kWidth + off, u);
        _mm256_store_pd(dbase + 2 * kWidth + off, r5);
        _mm256_store_pd(dbase + 3 * kWidth + off, _mm256_sub_pd(u, h0));
        _mm256_store_pd(dbase + 4 * kWidth + off, _mm256_sub_pd(w, h1));
        _mm256_store_pd(dbase + 5 * kWidth + off, _mm256_sub_pd(zero, h2));
    }
    return true;
}

__attribute__((target("avx2"))) void stage_avx2(const double* y0, const double* k,
                                                double coef, double* out) {
    const __m256d c = _mm256_set1_pd(coef);
    for (int i = 0; i < kSize; i += 4) {
        const __m256d a = _mm256_load_pd(y0 + i);
        const __m256d b = _mm256_load_pd(k + i);
        _mm256_store_pd(out + i, _mm256_add_pd(a, _mm256_mul_pd(c, b)));
    }
}

__attribute__((target("avx2"))) void combine_avx2(const double* y0,
                                                  const double* k1,
                                                  const double* k2,
                                                  const double* k3,
                                                  const double* k4, double h6,
                                                  double* out) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d h = _mm256_set1_pd(h6);
    for (int i = 0; i < kSize; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_load_pd(k1 + i),
                                  _mm256_mul_pd(two, _mm256_load_pd(k2 + i)));
        t = _mm256_add_pd(t, _mm256_mul_pd(two, _mm256_load_pd(k3 + i)));
        t = _mm256_add_pd(t, _mm256_load_pd(k4 + i));
        _mm256_store_pd(out + i,
                        _mm256_add_pd(_mm256_load_pd(y0 + i), _mm256_mul_pd(h, t)));
    }
}

}  // namespace

const KernelOps& avx2_kernels() {
    static const KernelOps ops{"avx2", combined_rhs_avx2, stage_avx2, combine_avx2};
    return ops;
}

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

#else

const KernelOps& avx2_kernels() {
    static const KernelOps ops{"avx2", nullptr, nullptr, nullptr};
    return ops;
}

bool avx2_available() { return false; }

#endif

}  // namespace hill::kernels
