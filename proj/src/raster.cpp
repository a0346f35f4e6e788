#include "inkgrain/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "inkgrain/error.hpp"

namespace inkgrain {
namespace {

void check_geometry(int width, int height, double dpi) {
    if (width <= 0 || height <= 0)
        throw ParameterError("image dimensions must be positive, got " + std::to_string(width) +
                             "x" + std::to_string(height));
    if (!(dpi > 0.0) || !std::isfinite(dpi))
        throw ParameterError("dpi must be positive");
}

void check_unit_range(std::span<const double> samples, const char* what) {
    for (double v : samples) {
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError(std::string(what) + " sample outside [0,1]: " + std::to_string(v));
    }
}

}  // namespace

RasterImage::RasterImage(int width, int height, double dpi, double fill)
    : width_(width), height_(height), dpi_(dpi) {
    check_geometry(width, height, dpi);
    if (!(fill >= 0.0 && fill <= 1.0)) throw DomainError("fill value outside [0,1]");
    samples_.assign(pixel_count() * kChannels, fill);
}

RasterImage::RasterImage(int width, int height, double dpi, std::vector<double> samples)
    : width_(width), height_(height), dpi_(dpi), samples_(std::move(samples)) {
    check_geometry(width, height, dpi);
    if (samples_.size() != pixel_count() * kChannels)
        throw ParameterError("raster sample count does not match 3 x width x height");
    check_unit_range(samples_, "raster");
}

std::vector<double> RasterImage::channel(int c) const {
    if (c < 0 || c >= kChannels) throw ParameterError("channel index out of range");
    std::vector<double> out(pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples_[i * kChannels + c];
    return out;
}

Plane::Plane(int width, int height, double dpi, double fill)
    : width_(width), height_(height), dpi_(dpi) {
    check_geometry(width, height, dpi);
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

Plane::Plane(int width, int height, double dpi, std::vector<double> samples)
    : width_(width), height_(height), dpi_(dpi), samples_(std::move(samples)) {
    check_geometry(width, height, dpi);
    if (samples_.size() != static_cast<std::size_t>(width) * height)
        throw ParameterError("plane sample count does not match width x height");
}

double Plane::mean() const noexcept {
    return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
           static_cast<double>(samples_.size());
}

ReflectanceImage::ReflectanceImage(int width, int height, double dpi, double fill)
    : Plane(width, height, dpi, fill) {
    if (!(fill >= 0.0 && fill <= 1.0)) throw DomainError("reflectance fill outside [0,1]");
}

ReflectanceImage::ReflectanceImage(int width, int height, double dpi, std::vector<double> samples)
    : Plane(width, height, dpi, std::move(samples)) {
    check_unit_range(samples_, "reflectance");
}

double percentile(std::span<const double> values, double p) {
    if (values.empty()) throw ParameterError("percentile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("percentile fraction outside [0,1]");
    std::vector<double> work(values.begin(), values.end());
    const double pos = p * static_cast<double>(work.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    std::nth_element(work.begin(), work.begin() + lo, work.end());
    const double a = work[lo];
    if (frac == 0.0 || lo + 1 >= work.size()) return a;
    // The next order statistic is the minimum of the upper partition.
    const double b = *std::min_element(work.begin() + lo + 1, work.end());
    return a + frac * (b - a);
}

}  // namespace inkgrain
