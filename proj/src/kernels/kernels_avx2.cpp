#include "subinfo/kernels.hpp"

#ifdef SUBINFO_HAVE_AVX2_KERNELS

#include <immintrin.h>

#define SUBINFO_AVX2 __attribute__((target("avx2,fma")))

namespace subinfo::kernels::avx2 {

namespace {
constexpr std::size_t N = 20;  // five __m256d per column
}

SUBINFO_AVX2 void matmul20(const double* a, const double* b, double* c) noexcept {
    for (std::size_t j = 0; j < N; ++j) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        __m256d acc2 = _mm256_setzero_pd();
        __m256d acc3 = _mm256_setzero_pd();
        __m256d acc4 = _mm256_setzero_pd();
        const double* bj = b + j * N;
        for (std::size_t k = 0; k < N; ++k) {
            const __m256d bkj = _mm256_broadcast_sd(bj + k);
            const double* ak = a + k * N;
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 0), bkj, acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 4), bkj, acc1);
            acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 8), bkj, acc2);
            acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 12), bkj, acc3);
            acc4 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 16), bkj, acc4);
        }
        double* cj = c + j * N;
        _mm256_storeu_pd(cj + 0, acc0);
        _mm256_storeu_pd(cj + 4, acc1);
        _mm256_storeu_pd(cj + 8, acc2);
        _mm256_storeu_pd(cj + 12, acc3);
        _mm256_storeu_pd(cj + 16, acc4);
    }
}

SUBINFO_AVX2 void matvec20(const double* a, const double* x, double* y) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    __m256d acc4 = _mm256_setzero_pd();
    for (std::size_t k = 0; k < N; ++k) {
        const __m256d xk = _mm256_broadcast_sd(x + k);
        const double* ak = a + k * N;
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 0), xk, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 4), xk, acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 8), xk, acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 12), xk, acc3);
        acc4 = _mm256_fmadd_pd(_mm256_loadu_pd(ak + 16), xk, acc4);
    }
    _mm256_storeu_pd(y + 0, acc0);
    _mm256_storeu_pd(y + 4, acc1);
    _mm256_storeu_pd(y + 8, acc2);
    _mm256_storeu_pd(y + 12, acc3);
    _mm256_storeu_pd(y + 16, acc4);
}

SUBINFO_AVX2 double dot(const double* x, const double* y, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

}  // namespace subinfo::kernels::avx2

#endif
