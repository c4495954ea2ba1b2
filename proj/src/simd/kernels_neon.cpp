// NEON variants for aarch64. Same lane semantics as the scalar reference;
// reductions differ only in summation order.

#include "mlabel/simd/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

namespace mlabel::simd {
namespace {

double sum_squares_neon(const double* a, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float64x2_t v0 = vld1q_f64(a + i);
        float64x2_t v1 = vld1q_f64(a + i + 2);
        acc0 = vaddq_f64(acc0, vmulq_f64(v0, v0));
        acc1 = vaddq_f64(acc1, vmulq_f64(v1, v1));
    }
    double total = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) total += a[i] * a[i];
    return total;
}

void mul_f32_f64_neon(double* out, const float* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t av = vcvt_f64_f32(vld1_f32(a + i));
        float64x2_t bv = vld1q_f64(b + i);
        vst1q_f64(out + i, vmulq_f64(av, bv));
    }
    for (; i < n; ++i) out[i] = static_cast<double>(a[i]) * b[i];
}

void scatter_add_f32_neon(double* acc, const std::uint32_t* idx, const float* val,
                          double scale, std::size_t n) {
    const float64x2_t sv = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vv = vcvt_f64_f32(vld1_f32(val + i));
        float64x2_t prod = vmulq_f64(sv, vv);
        acc[idx[i + 0]] += vgetq_lane_f64(prod, 0);
        acc[idx[i + 1]] += vgetq_lane_f64(prod, 1);
    }
    for (; i < n; ++i) acc[idx[i]] += scale * static_cast<double>(val[i]);
}

void scatter_add_f64_neon(double* acc, const std::uint32_t* idx, const double* val,
                          double scale, std::size_t n) {
    const float64x2_t sv = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vv = vld1q_f64(val + i);
        float64x2_t prod = vmulq_f64(sv, vv);
        acc[idx[i + 0]] += vgetq_lane_f64(prod, 0);
        acc[idx[i + 1]] += vgetq_lane_f64(prod, 1);
    }
    for (; i < n; ++i) acc[idx[i]] += scale * val[i];
}

}  // namespace

const Kernels* neon_kernels() {
    static const Kernels k{sum_squares_neon, mul_f32_f64_neon, scatter_add_f32_neon,
                           scatter_add_f64_neon};
    return &k;
}

}  // namespace mlabel::simd

#else

namespace mlabel::simd {
const Kernels* neon_kernels() { return nullptr; }
}  // namespace mlabel::simd

#endif
