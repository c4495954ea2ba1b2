// AVX2 variants. Built with -mavx2 on x86 only; the dispatcher checks CPU
// support before handing these out. Multiplies and adds are kept separate
// (no FMA) so each lane rounds exactly like the scalar reference.

#include "mlabel/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

namespace mlabel::simd {
namespace {

double sum_squares_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d v0 = _mm256_loadu_pd(a + i);
        __m256d v1 = _mm256_loadu_pd(a + i + 4);
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(v0, v0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(v1, v1));
    }
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(v, v));
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d sum2 = _mm_add_pd(lo, hi);
    double total = _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
    for (; i < n; ++i) total += a[i] * a[i];
    return total;
}

void mul_f32_f64_avx2(double* out, const float* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d av = _mm256_cvtps_pd(_mm_loadu_ps(a + i));
        __m256d bv = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(av, bv));
    }
    for (; i < n; ++i) out[i] = static_cast<double>(a[i]) * b[i];
}

void scatter_add_f32_avx2(double* acc, const std::uint32_t* idx, const float* val,
                          double scale, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        __m256d vv = _mm256_cvtps_pd(_mm_loadu_ps(val + i));
        __m256d gathered = _mm256_i32gather_pd(acc, ix, 8);
        __m256d sum = _mm256_add_pd(gathered, _mm256_mul_pd(sv, vv));
        // AVX2 has no scatter; write lanes back individually. Indices within
        // one call are distinct, so the gather cannot observe a stale lane.
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, sum);
        acc[idx[i + 0]] = lanes[0];
        acc[idx[i + 1]] = lanes[1];
        acc[idx[i + 2]] = lanes[2];
        acc[idx[i + 3]] = lanes[3];
    }
    for (; i < n; ++i) acc[idx[i]] += scale * static_cast<double>(val[i]);
}

void scatter_add_f64_avx2(double* acc, const std::uint32_t* idx, const double* val,
                          double scale, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        __m256d vv = _mm256_loadu_pd(val + i);
        __m256d gathered = _mm256_i32gather_pd(acc, ix, 8);
        __m256d sum = _mm256_add_pd(gathered, _mm256_mul_pd(sv, vv));
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, sum);
        acc[idx[i + 0]] = lanes[0];
        acc[idx[i + 1]] = lanes[1];
        acc[idx[i + 2]] = lanes[2];
        acc[idx[i + 3]] = lanes[3];
    }
    for (; i < n; ++i) acc[idx[i]] += scale * val[i];
}

}  // namespace

const Kernels* avx2_kernels() {
    static const Kernels k{sum_squares_avx2, mul_f32_f64_avx2, scatter_add_f32_avx2,
                           scatter_add_f64_avx2};
    return &k;
}

}  // namespace mlabel::simd

#else

namespace mlabel::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace mlabel::simd

#endif
