// SPDX-License-Identifier: Apache-2.0
//
// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.
#include <immintrin.h>

#include <cassert>

#include "mirelay/neumann_kernel.hpp"

namespace mirelay {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

NeumannSums neumann_sums_avx2(const LoopSamples& a, const LoopSamples& b) {
    assert(b.size() % 4 == 0);
    const std::size_t na = a.size();
    const std::size_t nb = b.size();

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    // lanes j, j+1, j+2, j+3 with j % 4 == 0: even lanes belong to the half grid
    const __m256d even_lanes = _mm256_set_pd(0.0, 1.0, 0.0, 1.0);

    __m256d acc = _mm256_setzero_pd();
    __m256d acc_coarse = _mm256_setzero_pd();
    __m256d acc_mag = _mm256_setzero_pd();

    for (std::size_t i = 0; i < na; ++i) {
        const __m256d ax = _mm256_set1_pd(a.px[i]);
        const __m256d ay = _mm256_set1_pd(a.py[i]);
        const __m256d az = _mm256_set1_pd(a.pz[i]);
        const __m256d atx = _mm256_set1_pd(a.tx[i]);
        const __m256d aty = _mm256_set1_pd(a.ty[i]);
        const __m256d atz = _mm256_set1_pd(a.tz[i]);

        __m256d row = _mm256_setzero_pd();
        __m256d row_coarse = _mm256_setzero_pd();
        for (std::size_t j = 0; j < nb; j += 4) {
            const __m256d dx = _mm256_sub_pd(ax, _mm256_loadu_pd(&b.px[j]));
            const __m256d dy = _mm256_sub_pd(ay, _mm256_loadu_pd(&b.py[j]));
            const __m256d dz = _mm256_sub_pd(az, _mm256_loadu_pd(&b.pz[j]));
            __m256d r2 = _mm256_mul_pd(dx, dx);
            r2 = _mm256_fmadd_pd(dy, dy, r2);
            r2 = _mm256_fmadd_pd(dz, dz, r2);

            __m256d dot = _mm256_mul_pd(atx, _mm256_loadu_pd(&b.tx[j]));
            dot = _mm256_fmadd_pd(aty, _mm256_loadu_pd(&b.ty[j]), dot);
            dot = _mm256_fmadd_pd(atz, _mm256_loadu_pd(&b.tz[j]), dot);

            const __m256d term = _mm256_mul_pd(dot, _mm256_div_pd(one, _mm256_sqrt_pd(r2)));
            row = _mm256_add_pd(row, term);
            row_coarse = _mm256_fmadd_pd(term, even_lanes, row_coarse);
            acc_mag = _mm256_add_pd(acc_mag, _mm256_and_pd(term, abs_mask));
        }
        acc = _mm256_add_pd(acc, row);
        if (i % 2 == 0) {
            acc_coarse = _mm256_add_pd(acc_coarse, row_coarse);
        }
    }

    NeumannSums s;
    s.fine = hsum(acc);
    s.coarse = hsum(acc_coarse);
    s.magnitude = hsum(acc_mag);
    return s;
}

} // namespace mirelay
