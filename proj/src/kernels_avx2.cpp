// AVX2 kernel variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here runs unless runtime dispatch selected it (see kernels.cpp).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

#include "cnl/kernels.hpp"

namespace cnl::kernels::avx2 {

namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double masked_sum(const double* a, const std::uint8_t* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::uint32_t m4;
        std::memcpy(&m4, x + i, 4);
        // widen four 0/1 bytes to doubles; multiplying by 0.0/1.0 is exact
        __m256d mask = _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(_mm_cvtsi32_si128(static_cast<int>(m4))));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), mask, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i)
        tail += a[i] * static_cast<double>(x[i]);
    return hsum(acc) + tail;
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double tail = 0.0;
    for (; i < n; ++i)
        tail += a[i] * b[i];
    return hsum(acc) + tail;
}

double sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i)
        tail += a[i];
    return hsum(acc) + tail;
}

}  // namespace cnl::kernels::avx2

#endif  // x86_64
