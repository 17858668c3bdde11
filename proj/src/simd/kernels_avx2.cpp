// Built with -mavx2; only reached after a runtime CPU check.
#include "citeclass/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace citeclass::simd {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

double energy_avx2(const double* x, const double* y, const double* c, std::size_t n, double* min_dist2) {
    double e = 0.0;
    __m256d vmin = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    double dmin = std::numeric_limits<double>::infinity();
    alignas(32) double d2s[4];
    alignas(32) double ccs[4];

    for (std::size_t i = 0; i < n; ++i) {
        const __m256d xi = _mm256_set1_pd(x[i]);
        const __m256d yi = _mm256_set1_pd(y[i]);
        const __m256d ci = _mm256_set1_pd(c[i]);
        double row = 0.0;
        std::size_t j = i + 1;
        // No vector log in AVX2; vectorize distances and coefficients, take
        // logs per lane.
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(x + j));
            const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(y + j));
            const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            vmin = _mm256_min_pd(vmin, d2);
            _mm256_store_pd(d2s, d2);
            _mm256_store_pd(ccs, _mm256_mul_pd(ci, _mm256_loadu_pd(c + j)));
            for (int k = 0; k < 4; ++k)
                if (ccs[k] != 0.0) row += ccs[k] * (0.5 * std::log(d2s[k]));
        }
        for (; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            const double d2 = dx * dx + dy * dy;
            dmin = d2 < dmin ? d2 : dmin;
            const double cc = c[i] * c[j];
            if (cc != 0.0) row += cc * (0.5 * std::log(d2));
        }
        e -= row;
    }
    const double vm = hmin(vmin);
    if (min_dist2) *min_dist2 = vm < dmin ? vm : dmin;
    return e;
}

void gradient_avx2(const double* x, const double* y, const double* c, std::size_t n, double* gx, double* gy) {
    const __m256d zero = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] == 0.0) continue;
        const __m256d xi = _mm256_set1_pd(x[i]);
        const __m256d yi = _mm256_set1_pd(y[i]);
        __m256d sx = zero, sy = zero;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(x + j));
            const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(y + j));
            const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            const __m256d live = _mm256_cmp_pd(d2, zero, _CMP_NEQ_OQ);
            // Coincident lanes divide 0/0; the mask zeroes them afterwards.
            const __m256d f = _mm256_and_pd(_mm256_div_pd(_mm256_loadu_pd(c + j), d2), live);
            sx = _mm256_add_pd(sx, _mm256_and_pd(_mm256_mul_pd(f, dx), live));
            sy = _mm256_add_pd(sy, _mm256_and_pd(_mm256_mul_pd(f, dy), live));
        }
        double tx = hsum(sx), ty = hsum(sy);
        for (; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            const double d2 = dx * dx + dy * dy;
            if (d2 == 0.0) continue;
            const double f = c[j] / d2;
            tx += f * dx;
            ty += f * dy;
        }
        gx[i] -= c[i] * tx;
        gy[i] -= c[i] * ty;
    }
}

} // namespace

namespace detail {
const RepulsionKernels kAvx2Kernels{&energy_avx2, &gradient_avx2};
} // namespace detail

} // namespace citeclass::simd
