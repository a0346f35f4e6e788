#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "inkgrain/colorimetry.hpp"
#include "inkgrain/error.hpp"
#include "inkgrain/image_io.hpp"
#include "test_support.hpp"

using namespace inkgrain;
namespace fs = std::filesystem;

TEST_CASE("srgb_to_linear fixed points and midpoint") {
    CHECK(srgb_to_linear(0.0) == 0.0);
    CHECK(srgb_to_linear(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    // oracle: ((0.5 + 0.055) / 1.055)^2.4 = 0.2140411...
    CHECK(std::abs(srgb_to_linear(0.5) - 0.21404) < 1e-5);
    CHECK(srgb_to_linear(0.04) == doctest::Approx(0.04 / 12.92));
    CHECK_THROWS_AS(srgb_to_linear(-0.01), DomainError);
    CHECK_THROWS_AS(srgb_to_linear(1.01), DomainError);
}

TEST_CASE("srgb encode inverts decode") {
    for (int i = 0; i <= 1000; ++i) {
        const double v = i / 1000.0;
        CHECK(linear_to_srgb(srgb_to_linear(v)) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("luminance of uniform images") {
    const auto white = luminance(test::gray_image(4, 3, 1.0));
    for (double v : white.samples()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    const auto black = luminance(test::gray_image(4, 3, 0.0));
    for (double v : black.samples()) CHECK(v == 0.0);
    const auto gray = luminance(test::gray_image(4, 3, 0.5));
    CHECK(gray.width() == 4);
    CHECK(gray.height() == 3);
    CHECK(gray.dpi() == 8000.0);
    for (double v : gray.samples()) {
        CHECK(std::abs(v - 0.21404) < 1e-5);
        CHECK(std::abs(v - srgb_to_linear(0.5)) < 1e-9);
    }
}

TEST_CASE("luminance of any gray equals its linearization") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double g = u(rng);
        const auto y = luminance(test::gray_image(2, 2, g));
        CHECK(std::abs(y.samples()[0] - srgb_to_linear(g)) < 1e-9);
    }
}

TEST_CASE("CIELAB lightness conversions") {
    CHECK(reflectance_from_lstar(LStar(100.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(reflectance_from_lstar(LStar(0.0)) == 0.0);
    // oracle: (66/116)^3 = 0.184186...
    CHECK(std::abs(reflectance_from_lstar(LStar(50.0)) - 0.18419) < 1e-5);
    CHECK(lstar_from_reflectance(1.0).value() == doctest::Approx(100.0));
    CHECK(lstar_from_reflectance(0.0).value() == 0.0);
    CHECK(std::abs(lstar_from_reflectance(0.18419).value() - 50.0) < 1e-3);
    CHECK_THROWS_AS(LStar(-1.0), DomainError);
    CHECK_THROWS_AS(LStar(100.5), DomainError);
    CHECK_THROWS_AS(lstar_from_reflectance(1.5), DomainError);
    CHECK_THROWS_AS(lstar_from_reflectance(-0.1), DomainError);
}

TEST_CASE("CIELAB round trip and monotonicity on random samples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double r = u(rng);
        CHECK(std::abs(reflectance_from_lstar(lstar_from_reflectance(r)) - r) < 1e-9);
    }
    for (int t = 0; t < 1000; ++t) {
        double a = u(rng), b = u(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(lstar_from_reflectance(a).value() < lstar_from_reflectance(b).value());
        const double la = 100.0 * a, lb = 100.0 * b;
        CHECK(reflectance_from_lstar(LStar(la)) < reflectance_from_lstar(LStar(lb)));
    }
}

TEST_CASE("normalize_white") {
    SUBCASE("bright region maps to one") {
        std::vector<double> v(100, 0.2);
        for (int i = 50; i < 100; ++i) v[i] = 0.8;
        const auto out = normalize_white(ReflectanceImage(10, 10, 100.0, v), 0.99);
        CHECK(out.samples()[99] == doctest::Approx(1.0));
        CHECK(out.samples()[0] == doctest::Approx(0.25));
    }
    SUBCASE("idempotent on a normalized image") {
        std::vector<double> v(64);
        // top four samples at 1, so the interpolated 99th percentile is exactly 1
        for (int i = 0; i < 64; ++i) v[i] = std::min(1.0, i / 60.0);
        const ReflectanceImage img(8, 8, 100.0, v);
        const auto once = normalize_white(img, 0.99);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(once.samples()[i] == v[i]);
        const auto twice = normalize_white(once, 0.99);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(twice.samples()[i] == once.samples()[i]);
    }
    SUBCASE("ramp 0..0.5 stretches to 0..1") {
        const int n = 1000;
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = 0.5 * i / (n - 1);
        // brute-force percentile: sort, interpolate at 0.99 * (n - 1)
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        const double pos = 0.99 * (n - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const double divisor = sorted[lo] + (pos - lo) * (sorted[lo + 1] - sorted[lo]);
        CHECK(divisor == doctest::Approx(0.495));
        const auto out = normalize_white(ReflectanceImage(n, 1, 100.0, v), 0.99);
        CHECK(out.samples()[0] == 0.0);
        CHECK(out.samples()[n - 1] == 1.0);
        CHECK(out.samples()[500] == doctest::Approx(v[500] / divisor));
    }
    SUBCASE("all-zero image is degenerate") {
        CHECK_THROWS_AS(normalize_white(ReflectanceImage(4, 4, 100.0, 0.0)), DegenerateError);
    }
    SUBCASE("percentile bounds") {
        const ReflectanceImage img(4, 4, 100.0, 0.5);
        CHECK_THROWS_AS(normalize_white(img, 0.0), ParameterError);
        CHECK_THROWS_AS(normalize_white(img, 1.0), ParameterError);
    }
}

TEST_CASE("raster invariants") {
    CHECK_THROWS_AS(RasterImage(0, 4, 100.0), ParameterError);
    CHECK_THROWS_AS(RasterImage(4, 4, 0.0), ParameterError);
    CHECK_THROWS_AS(RasterImage(1, 1, 100.0, std::vector<double>{0.1, 1.2, 0.3}), DomainError);
    CHECK_THROWS_AS(RasterImage(1, 1, 100.0, std::vector<double>{0.1, 0.2}), ParameterError);
    CHECK_THROWS_AS(ReflectanceImage(1, 1, 100.0, std::vector<double>{-0.1}), DomainError);
    CHECK_NOTHROW(Plane(1, 1, 100.0, std::vector<double>{-3.0}));
}

TEST_CASE("percentile interpolates order statistics") {
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(percentile(v, 0.0) == 1.0);
    CHECK(percentile(v, 1.0) == 4.0);
    CHECK(percentile(v, 0.5) == doctest::Approx(2.5));
}

namespace {

fs::path scratch_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / ("inkgrain_test_" + std::string(name));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("PNG raster round trip keeps dpi and 16-bit precision") {
    const fs::path dir = scratch_dir("png");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(5 * 4 * 3);
    for (double& v : s) v = u(rng);
    const RasterImage img(5, 4, 8000.0, s);
    io::write_png_rgb16(dir / "a.png", img);
    const RasterImage back = io::read_png(dir / "a.png", 1234.0);
    CHECK(back.width() == 5);
    CHECK(back.height() == 4);
    CHECK(back.dpi() == 8000.0);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(back.samples()[i] - s[i]) <= 0.5 / 65535.0 + 1e-12);
}

TEST_CASE("IGR1 dump is lossless with the documented header") {
    const fs::path dir = scratch_dir("igr1");
    const Plane p(3, 2, 8000.0, std::vector<double>{-0.5, 0.25, 1e-300, 3.0, 0.0, -1.0});
    io::write_igr1(dir / "p.igr", p);
    std::ifstream in(dir / "p.igr", std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
    REQUIRE(bytes.size() == 16 + 6 * 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "IGR1");
    CHECK(bytes[4] == 3);
    CHECK(bytes[8] == 2);
    CHECK((bytes[12] | bytes[13] << 8) == 8000);
    const Plane back = io::read_igr1(dir / "p.igr");
    CHECK(back.width() == 3);
    CHECK(back.dpi() == 8000.0);
    CHECK(std::equal(back.samples().begin(), back.samples().end(), p.samples().begin()));
}

TEST_CASE("label and mask PNG codes") {
    const fs::path dir = scratch_dir("labels");
    std::mt19937_64 rng(5);
    const LabelMap labels = test::random_labels(7, 5, rng);
    io::write_label_png(dir / "l.png", labels, 8000.0);
    CHECK(io::read_label_png(dir / "l.png") == labels);
    const RasterImage raw = io::read_png(dir / "l.png");
    for (std::size_t i = 0; i < labels.size(); ++i)
        CHECK(std::lround(raw.samples()[3 * i] * 255.0) == label_code(labels.get(i)));
    CHECK(label_code(Label::W) == 255);
    CHECK(label_code(Label::PC) == 85);
    CHECK(label_code(Label::PM) == 170);
    CHECK(label_code(Label::O) == 0);

    const BinaryMask mask = test::random_mask(6, 6, 0.4, rng);
    io::write_mask_png(dir / "m.png", mask, 8000.0);
    CHECK(io::read_mask_png(dir / "m.png") == mask);
}

TEST_CASE("reading a missing or corrupt PNG fails with IoError") {
    const fs::path dir = scratch_dir("bad");
    CHECK_THROWS_AS(io::read_png(dir / "missing.png"), IoError);
    io::write_text_atomic(dir / "bad.png", "not a png");
    CHECK_THROWS_AS(io::read_png(dir / "bad.png"), IoError);
}
