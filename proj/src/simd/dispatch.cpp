#include <atomic>
#include <cstdlib>
#include <string>

#include "mlabel/common.hpp"
#include "mlabel/simd/kernels.hpp"

namespace mlabel::simd {

const Kernels* avx2_kernels();  // null when not compiled in / unsupported
const Kernels* neon_kernels();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

bool cpu_has_neon() {
#if defined(__aarch64__)
    return true;
#else
    return false;
#endif
}

struct Dispatch {
    Isa isa;
    const Kernels* kernels;
};

Dispatch pick_default() {
    const char* env = std::getenv("MLABEL_SIMD");
    if (env != nullptr) {
        const std::string want(env);
        if (want == "scalar") return {Isa::scalar, &scalar_kernels()};
        if (want == "avx2" && cpu_has_avx2() && avx2_kernels())
            return {Isa::avx2, avx2_kernels()};
        if (want == "neon" && cpu_has_neon() && neon_kernels())
            return {Isa::neon, neon_kernels()};
        log_warn("MLABEL_SIMD=" + want + " not usable on this CPU, falling back to auto");
    }
    if (cpu_has_avx2() && avx2_kernels()) return {Isa::avx2, avx2_kernels()};
    if (cpu_has_neon() && neon_kernels()) return {Isa::neon, neon_kernels()};
    return {Isa::scalar, &scalar_kernels()};
}

Dispatch& state() {
    static Dispatch d = pick_default();
    return d;
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "?";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return cpu_has_avx2() && avx2_kernels() != nullptr;
        case Isa::neon: return cpu_has_neon() && neon_kernels() != nullptr;
    }
    return false;
}

const Kernels& active() { return *state().kernels; }

Isa active_isa() { return state().isa; }

void force_isa(Isa isa) {
    if (!isa_available(isa))
        throw error(std::string("SIMD ISA not available on this CPU: ") + isa_name(isa));
    switch (isa) {
        case Isa::scalar: state() = {Isa::scalar, &scalar_kernels()}; break;
        case Isa::avx2: state() = {Isa::avx2, avx2_kernels()}; break;
        case Isa::neon: state() = {Isa::neon, neon_kernels()}; break;
    }
}

}  // namespace mlabel::simd
