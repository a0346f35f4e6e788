#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "inkgrain/error.hpp"
#include "inkgrain/graininess.hpp"
#include "test_support.hpp"

using namespace inkgrain;

namespace {

constexpr double kPi = std::numbers::pi;

Plane sinusoid(int w, int h, double dpi, int u, double amplitude = 0.2, double base = 0.5) {
    std::vector<double> v(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) v[static_cast<std::size_t>(y) * w + x] = base + amplitude * std::sin(2 * kPi * u * x / w);
    return Plane(w, h, dpi, std::move(v));
}

// Amplitude of horizontal frequency bin u by direct summation.
double bin_amplitude(const Plane& p, int u) {
    std::complex<double> acc = 0.0;
    for (int y = 0; y < p.height(); ++y)
        for (int x = 0; x < p.width(); ++x) acc += p.at(x, y) * std::polar(1.0, -2 * kPi * u * x / p.width());
    return 2.0 * std::abs(acc) / static_cast<double>(p.size());
}

Plane random_plane(int w, int h, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(w) * h);
    for (double& x : v) x = d(rng);
    return Plane(w, h, 8000.0, std::move(v));
}

double sum_sq(const Plane& p, double centre = 0.0) {
    double s = 0.0;
    for (double v : p.samples()) s += (v - centre) * (v - centre);
    return s;
}

}  // namespace

TEST_CASE("butterworth gain values") {
    const BandPassSpec s;
    CHECK(butterworth_gain(0.0, s) == 0.0);
    // at the geometric centre both skirts are tiny: 1/sqrt(1 + 0.1^4) squared
    const double centre = butterworth_gain(std::sqrt(10.0), s);
    CHECK(centre == doctest::Approx(1.0 / (1.0 + std::pow(std::sqrt(10.0) / 10.0, 4))).epsilon(1e-12));
    const double expect10 = (1.0 / std::sqrt(2.0)) / std::sqrt(1.0 + std::pow(0.1, 4));
    CHECK(butterworth_gain(10.0, s) == doctest::Approx(expect10).epsilon(1e-12));
    CHECK(butterworth_gain(1.0, s) == doctest::Approx(expect10).epsilon(1e-12));
    CHECK_THROWS_AS(butterworth_gain(-1.0, s), DomainError);
    BandPassSpec bad;
    bad.f_lo = 10;
    bad.f_hi = 1;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = {};
    bad.order = 0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("constant image filters to zero") {
    const Plane out = bandpass_filter(Plane(40, 30, 8000.0, 0.7), {});
    for (double v : out.samples()) CHECK(std::abs(v) <= 1e-12);
    const Plane odd = bandpass_filter(Plane(33, 17, 8000.0, 0.3), {});
    CHECK(odd.width() == 33);
    CHECK(odd.height() == 17);
    for (double v : odd.samples()) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("in-band sinusoid is scaled by the gain") {
    // 254 dpi = 10 px/mm; 100 px wide, bin 30 = 3 cycles/mm.
    const BandPassSpec s;
    const Plane in = sinusoid(100, 32, 254.0, 30);
    const Plane out = bandpass_filter(in, s);
    const double ratio = bin_amplitude(out, 30) / bin_amplitude(in, 30);
    CHECK(std::abs(ratio - butterworth_gain(3.0, s)) <= 1e-6);
    // the whole image is the scaled zero-mean sinusoid
    for (int x = 0; x < 100; ++x)
        CHECK(out.at(x, 5) == doctest::Approx(butterworth_gain(3.0, s) * (in.at(x, 5) - 0.5)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("out-of-band sinusoid is attenuated") {
    // 2540 dpi = 100 px/mm; 100 px wide, bin 40 = 40 cycles/mm.
    const Plane in = sinusoid(100, 20, 2540.0, 40);
    const Plane out = bandpass_filter(in, {});
    CHECK(bin_amplitude(out, 40) / bin_amplitude(in, 40) < 0.07);
}

TEST_CASE("filter is linear and energy non-increasing") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 5; ++t) {
        const int w = 32 + 7 * t, h = 18 + 5 * t;
        const Plane a = random_plane(w, h, rng), b = random_plane(w, h, rng);
        std::vector<double> mix(a.size());
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * a.samples()[i] - 0.5 * b.samples()[i];
        const Plane fa = bandpass_filter(a, {}), fb = bandpass_filter(b, {});
        const Plane fm = bandpass_filter(Plane(w, h, 8000.0, mix), {});
        double worst = 0.0;
        for (std::size_t i = 0; i < mix.size(); ++i)
            worst = std::max(worst, std::abs(fm.samples()[i] - (2.0 * fa.samples()[i] - 0.5 * fb.samples()[i])));
        CHECK(worst <= 1e-10);
        if (w % 2 == 0 && h % 2 == 0) {
            CHECK(std::abs(fa.mean()) <= 1e-12);
            CHECK(sum_sq(fa) <= sum_sq(a, a.mean()) * (1 + 1e-12));
        }
    }
}

TEST_CASE("filter rejects tiny images") {
    CHECK_THROWS_AS(bandpass_filter(Plane(15, 40, 8000.0, 0.0), {}), ParameterError);
}

TEST_CASE("pearson fixtures") {
    const std::vector<double> a{1, 2, 3, 4}, up{2, 4, 6, 8}, down{4, 3, 2, 1}, flat{5, 5, 5, 5};
    CHECK(pearson(a, up) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(a, down) == doctest::Approx(-1.0).epsilon(1e-15));
    const std::vector<double> x{1, 2, 3}, y{1, 3, 2};
    CHECK(pearson(x, y) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(pearson(a, flat), DegenerateError);
    CHECK_THROWS_AS(pearson(a, x), ParameterError);
}

TEST_CASE("pearson is affine invariant and symmetric") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        std::vector<double> a(200), b(200), c(200);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = g(rng);
            b[i] = 0.5 * a[i] + g(rng);
            c[i] = -3.0 * b[i] + 7.0;
        }
        const double r = pearson(a, b);
        CHECK(pearson(b, a) == doctest::Approx(r).epsilon(1e-14));
        CHECK(pearson(a, c) == doctest::Approx(-r).epsilon(1e-12));
        // textbook single formula as oracle
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        const double n = 200;
        for (std::size_t i = 0; i < a.size(); ++i) {
            sa += a[i];
            sb += b[i];
            saa += a[i] * a[i];
            sbb += b[i] * b[i];
            sab += a[i] * b[i];
        }
        const double oracle = (n * sab - sa * sb) / std::sqrt((n * saa - sa * sa) * (n * sbb - sb * sb));
        CHECK(r == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("two-class patch attributes grain with opposite signs") {
    const int n = 64;
    std::mt19937_64 rng(12);
    std::bernoulli_distribution ink(0.4);
    LabelMap labels(n, n);
    // 4 px blocks at 254 dpi put the texture inside the band
    for (int by = 0; by < n / 4; ++by)
        for (int bx = 0; bx < n / 4; ++bx) {
            const Label l = ink(rng) ? Label::PC : Label::W;
            for (int y = 0; y < 4; ++y)
                for (int x = 0; x < 4; ++x) labels.set(bx * 4 + x, by * 4 + y, l);
        }
    ReflectanceModel m;
    m.r_pc = 0.3;
    m.r_pm = 0.4;
    m.r_o = 0.1;
    m.r_w = 0.9;
    const Plane recon = reconstruct_reflectance(labels, m, 254.0);
    const ReflectanceImage refl(n, n, 254.0, std::vector<double>(recon.samples().begin(), recon.samples().end()));
    const GrainReport r = component_grain_correlations(labels, refl, m, {});
    REQUIRE(r.component[index_of(Label::PC)].has_value());
    REQUIRE(r.component[index_of(Label::W)].has_value());
    CHECK(*r.component[index_of(Label::PC)] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(*r.component[index_of(Label::W)] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(r.component[index_of(Label::PM)].has_value());
    CHECK_FALSE(r.component[index_of(Label::O)].has_value());
    REQUIRE(r.reconstruction.has_value());
    CHECK(std::abs(*r.reconstruction - 1.0) <= 1e-9);
}

TEST_CASE("flat patch has no defined correlations") {
    const LabelMap labels(32, 32);
    const ReflectanceImage refl(32, 32, 8000.0, 0.9);
    ReflectanceModel m;
    m.r_w = 0.9;
    const GrainReport r = component_grain_correlations(labels, refl, m, {});
    for (const auto& c : r.component) CHECK_FALSE(c.has_value());
    CHECK_FALSE(r.reconstruction.has_value());
}
