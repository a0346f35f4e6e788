#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace inkgrain {

/// Three-channel (R,G,B) raster with samples normalized to [0,1] and
/// interleaved row-major. Samples are storage-encoded (sRGB), not linear.
class RasterImage {
public:
    static constexpr int kChannels = 3;

    /// Uniform image with every sample set to `fill`.
    RasterImage(int width, int height, double dpi, double fill = 0.0);
    RasterImage(int width, int height, double dpi, std::vector<double> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double dpi() const noexcept { return dpi_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    double at(int x, int y, int c) const noexcept {
        return samples_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
    }
    std::span<const double> samples() const noexcept { return samples_; }

    /// Copy of one channel as a contiguous plane.
    std::vector<double> channel(int c) const;

    bool same_shape(const RasterImage& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_;
    int height_;
    double dpi_;
    std::vector<double> samples_;
};

/// Single-channel double image. Values are unconstrained; band-passed
/// images are signed.
class Plane {
public:
    Plane(int width, int height, double dpi, double fill = 0.0);
    Plane(int width, int height, double dpi, std::vector<double> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double dpi() const noexcept { return dpi_; }
    std::size_t size() const noexcept { return samples_.size(); }

    double at(int x, int y) const noexcept {
        return samples_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::span<const double> samples() const noexcept { return samples_; }

    double mean() const noexcept;

    bool same_shape(const Plane& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

protected:
    int width_;
    int height_;
    double dpi_;
    std::vector<double> samples_;
};

/// Per-pixel relative reflectance; every sample lies in [0,1].
class ReflectanceImage : public Plane {
public:
    ReflectanceImage(int width, int height, double dpi, double fill = 0.0);
    ReflectanceImage(int width, int height, double dpi, std::vector<double> samples);
};

/// Sample at fraction `p` of the sorted values with linear interpolation
/// between order statistics (position p*(n-1)).
double percentile(std::span<const double> values, double p);

}  // namespace inkgrain
