#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mlabel/simd/kernels.hpp"

using namespace mlabel;

namespace {

// Sizes chosen to hit empty, sub-vector and remainder paths.
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 31, 33, 100, 1000, 4097};

struct Arrays {
    std::vector<double> d1, d2;
    std::vector<float> f1;
    std::vector<std::uint32_t> idx;
};

Arrays make_arrays(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    Arrays a;
    a.d1.resize(n);
    a.d2.resize(n);
    a.f1.resize(n);
    a.idx.resize(n);
    std::iota(a.idx.begin(), a.idx.end(), 0u);
    std::shuffle(a.idx.begin(), a.idx.end(), rng);  // distinct, scrambled
    for (std::size_t i = 0; i < n; ++i) {
        a.d1[i] = dist(rng);
        a.d2[i] = dist(rng);
        a.f1[i] = static_cast<float>(dist(rng));
    }
    return a;
}

}  // namespace

TEST_CASE("active ISA reports and can be forced to scalar") {
    const auto saved = simd::active_isa();
    CHECK(simd::isa_available(simd::Isa::scalar));
    simd::force_isa(simd::Isa::scalar);
    CHECK(simd::active_isa() == simd::Isa::scalar);
    simd::force_isa(saved);
    CHECK(simd::active_isa() == saved);
}

TEST_CASE("sum_squares: simd matches scalar within reduction-order slack") {
    const auto& ref = simd::scalar_kernels();
    const auto& act = simd::active();
    std::mt19937_64 rng(101);
    for (std::size_t n : kSizes) {
        auto a = make_arrays(n, rng);
        const double want = ref.sum_squares(a.d1.data(), n);
        const double got = act.sum_squares(a.d1.data(), n);
        CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("mul_f32_f64: simd matches scalar exactly") {
    const auto& ref = simd::scalar_kernels();
    const auto& act = simd::active();
    std::mt19937_64 rng(102);
    for (std::size_t n : kSizes) {
        auto a = make_arrays(n, rng);
        std::vector<double> want(n), got(n);
        ref.mul_f32_f64(want.data(), a.f1.data(), a.d1.data(), n);
        act.mul_f32_f64(got.data(), a.f1.data(), a.d1.data(), n);
        CHECK(want == got);
    }
}

TEST_CASE("scatter_add kernels: lanes are independent, so simd is bit-exact") {
    const auto& ref = simd::scalar_kernels();
    const auto& act = simd::active();
    std::mt19937_64 rng(103);
    for (std::size_t n : kSizes) {
        auto a = make_arrays(n, rng);
        const double scale = 1.375;
        std::vector<double> want(a.d2), got(a.d2);

        ref.scatter_add_f32(want.data(), a.idx.data(), a.f1.data(), scale, n);
        act.scatter_add_f32(got.data(), a.idx.data(), a.f1.data(), scale, n);
        CHECK(want == got);

        want = a.d2;
        got = a.d2;
        ref.scatter_add_f64(want.data(), a.idx.data(), a.d1.data(), scale, n);
        act.scatter_add_f64(got.data(), a.idx.data(), a.d1.data(), scale, n);
        CHECK(want == got);
    }
}

TEST_CASE("scatter_add into a wide accumulator with sparse indices") {
    const auto& ref = simd::scalar_kernels();
    const auto& act = simd::active();
    std::mt19937_64 rng(104);
    const std::size_t acc_size = 10000;
    const std::size_t n = 513;

    std::vector<std::uint32_t> idx(acc_size);
    std::iota(idx.begin(), idx.end(), 0u);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n);

    std::vector<float> val(n);
    std::uniform_real_distribution<float> dist(0.0f, 5.0f);
    for (auto& v : val) v = dist(rng);

    std::vector<double> want(acc_size, 0.0), got(acc_size, 0.0);
    ref.scatter_add_f32(want.data(), idx.data(), val.data(), 2.5, n);
    act.scatter_add_f32(got.data(), idx.data(), val.data(), 2.5, n);
    CHECK(want == got);
}
