#include "inkgrain/colorimetry.hpp"

#include <cmath>
#include <string>

#include "inkgrain/error.hpp"

namespace inkgrain {
namespace {

constexpr double kWeightR = 0.2126;
constexpr double kWeightG = 0.7152;
constexpr double kWeightB = 0.0722;

// CIE constants as used by the common formulation: epsilon = (6/29)^3, kappa = 903.3.
constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 903.3;

void require_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0))
        throw DomainError(std::string(what) + " outside [0,1]: " + std::to_string(v));
}

}  // namespace

LStar::LStar(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 100.0))
        throw DomainError("L* outside [0,100]: " + std::to_string(value));
}

double srgb_to_linear(double v) {
    require_unit(v, "sRGB sample");
    if (v <= 0.04045) return v / 12.92;
    return std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
    require_unit(v, "linear sample");
    if (v <= 0.0031308) return v * 12.92;
    if (v == 1.0) return 1.0;  // the power form lands one ulp short
    return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

ReflectanceImage luminance(const RasterImage& img) {
    const auto src = img.samples();
    std::vector<double> out(img.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = srgb_to_linear(src[3 * i]);
        const double g = srgb_to_linear(src[3 * i + 1]);
        const double b = srgb_to_linear(src[3 * i + 2]);
        // Weights sum to 1 but rounding may push white a hair above it.
        out[i] = std::min(1.0, kWeightR * r + kWeightG * g + kWeightB * b);
    }
    return ReflectanceImage(img.width(), img.height(), img.dpi(), std::move(out));
}

double reflectance_from_lstar(LStar l) {
    const double v = l.value();
    if (v > 8.0) {
        const double t = (v + 16.0) / 116.0;
        return t * t * t;
    }
    return v / kKappa;
}

LStar lstar_from_reflectance(double r) {
    require_unit(r, "reflectance");
    if (r > kEpsilon) return LStar(std::min(100.0, 116.0 * std::cbrt(r) - 16.0));
    return LStar(kKappa * r);
}

double white_level(const ReflectanceImage& img, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("white percentile must lie in (0,1)");
    return percentile(img.samples(), p);
}

ReflectanceImage apply_white(const ReflectanceImage& img, double white) {
    if (!(white > 0.0))
        throw DegenerateError("paper-white level is zero; cannot calibrate an all-dark image");
    std::vector<double> out(img.samples().begin(), img.samples().end());
    for (double& v : out) v = std::min(1.0, v / white);
    return ReflectanceImage(img.width(), img.height(), img.dpi(), std::move(out));
}

ReflectanceImage normalize_white(const ReflectanceImage& img, double p) {
    return apply_white(img, white_level(img, p));
}

}  // namespace inkgrain
