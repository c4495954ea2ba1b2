#pragma once

#include <cstddef>
#include <cstdint>

// Arithmetic inner loops of index construction, retrieval and concept-score
// accumulation. Each kernel has a scalar reference implementation plus
// AVX2/NEON variants selected once at startup; the variants are equivalence-
// tested against the scalar reference. The scatter kernels process lanes
// independently (no fused reductions), so they match the scalar path
// bit-for-bit; the reduction kernels may differ by summation order only.

namespace mlabel::simd {

struct Kernels {
    // sum of squares of a[0..n)
    double (*sum_squares)(const double* a, std::size_t n);
    // out[i] = double(a[i]) * b[i]
    void (*mul_f32_f64)(double* out, const float* a, const double* b, std::size_t n);
    // acc[idx[i]] += scale * double(val[i]); idx values must be distinct
    void (*scatter_add_f32)(double* acc, const std::uint32_t* idx, const float* val,
                            double scale, std::size_t n);
    // acc[idx[i]] += scale * val[i]; idx values must be distinct
    void (*scatter_add_f64)(double* acc, const std::uint32_t* idx, const double* val,
                            double scale, std::size_t n);
};

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

const Kernels& scalar_kernels();

// Kernels for the best ISA the CPU supports, or whatever force_isa /
// MLABEL_SIMD(=scalar|avx2|neon) selected.
const Kernels& active();
Isa active_isa();

// Throws mlabel::error if the requested ISA is not available on this CPU.
void force_isa(Isa isa);

bool isa_available(Isa isa);

}  // namespace mlabel::simd
