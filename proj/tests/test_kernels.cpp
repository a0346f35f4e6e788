#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "inkgrain/kernels.hpp"

using namespace inkgrain;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("active table is one of the compiled variants") {
    const auto& t = kernels::active();
    CHECK((t.name == "scalar" || t.name == "avx2"));
    if (kernels::avx2() == nullptr) CHECK(t.name == "scalar");
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    const kernels::KernelTable* simd = kernels::avx2();
    if (simd == nullptr) {
        MESSAGE("AVX2 unavailable; equivalence not exercised on this host");
        return;
    }
    const auto& ref = kernels::scalar();
    std::mt19937_64 rng(99);

    SUBCASE("squared distances are bit-identical") {
        for (std::size_t n = 0; n < 70; ++n) {
            const auto xs = random_vec(n, rng, 0, 1), ys = random_vec(n, rng, 0, 1),
                       zs = random_vec(n, rng, 0, 1);
            const auto q = random_vec(3, rng, 0, 1);
            std::vector<double> a(n), b(n);
            ref.squared_distances_3d(q.data(), xs.data(), ys.data(), zs.data(), n, a.data());
            simd->squared_distances_3d(q.data(), xs.data(), ys.data(), zs.data(), n, b.data());
            CHECK(bit_equal(a, b));
        }
    }

    SUBCASE("box threshold rows are identical") {
        for (std::size_t n = 1; n < 60; ++n) {
            const std::size_t win = 1 + n % 7;
            auto top = random_vec(n + win, rng, 0, 50), bottom = random_vec(n + win, rng, 0, 100);
            std::sort(top.begin(), top.end());
            std::sort(bottom.begin(), bottom.end());
            const auto values = random_vec(n, rng, 0, 1);
            std::vector<std::uint8_t> a(n), b(n);
            const double inv = 1.0 / static_cast<double>(win * win);
            ref.box_mean_below(top.data(), bottom.data(), values.data(), n, win, inv, 0.04, a.data());
            simd->box_mean_below(top.data(), bottom.data(), values.data(), n, win, inv, 0.04, b.data());
            CHECK(a == b);
        }
    }

    SUBCASE("complex gain scaling is bit-identical") {
        for (std::size_t n = 0; n < 40; ++n) {
            auto data = random_vec(2 * n, rng);
            auto copy = data;
            const auto gains = random_vec(n, rng, 0, 1);
            ref.scale_complex(data.data(), gains.data(), n);
            simd->scale_complex(copy.data(), gains.data(), n);
            CHECK(bit_equal(data, copy));
        }
    }

    SUBCASE("centered moments agree to rounding") {
        for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 1000u, 100003u}) {
            const auto a = random_vec(n, rng), b = random_vec(n, rng);
            const auto x = ref.centered_moments(a.data(), b.data(), n, 0.01, -0.02);
            const auto y = simd->centered_moments(a.data(), b.data(), n, 0.01, -0.02);
            const double scale = static_cast<double>(n);
            CHECK(std::abs(x.sab - y.sab) <= 1e-12 * scale);
            CHECK(std::abs(x.saa - y.saa) <= 1e-12 * scale);
            CHECK(std::abs(x.sbb - y.sbb) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("scalar squared distance matches the written-out formula") {
    const double q[3] = {0.5, 0.25, 0.125};
    const double xs[2] = {0.0, 1.0}, ys[2] = {0.25, 0.0}, zs[2] = {0.125, 1.0};
    double out[2];
    kernels::scalar().squared_distances_3d(q, xs, ys, zs, 2, out);
    CHECK(out[0] == 0.25);
    CHECK(out[1] == doctest::Approx(0.25 + 0.0625 + 0.765625));
}
