#include "mlabel/simd/kernels.hpp"

namespace mlabel::simd {
namespace {

double sum_squares_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void mul_f32_f64_scalar(double* out, const float* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(a[i]) * b[i];
}

void scatter_add_f32_scalar(double* acc, const std::uint32_t* idx, const float* val,
                            double scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[idx[i]] += scale * static_cast<double>(val[i]);
}

void scatter_add_f64_scalar(double* acc, const std::uint32_t* idx, const double* val,
                            double scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[idx[i]] += scale * val[i];
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{sum_squares_scalar, mul_f32_f64_scalar, scatter_add_f32_scalar,
                           scatter_add_f64_scalar};
    return k;
}

}  // namespace mlabel::simd
