#pragma once

#include "inkgrain/raster.hpp"

namespace inkgrain {

/// CIE lightness, 0..100.
class LStar {
public:
    explicit LStar(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// sRGB decoding to linear light.
double srgb_to_linear(double v);
/// sRGB encoding from linear light.
double linear_to_srgb(double v);

/// Rec. 709 luminance of the linearized channels.
ReflectanceImage luminance(const RasterImage& img);

/// Y/Yn from L*; linear segment below L* = 8.
double reflectance_from_lstar(LStar l);
LStar lstar_from_reflectance(double r);

/// Value of the sample at the `percentile` upper order statistic, used as
/// the paper-white level.
double white_level(const ReflectanceImage& img, double percentile = 0.99);

/// Divide by `white` and clamp to [0,1].
ReflectanceImage apply_white(const ReflectanceImage& img, double white);

/// Paper-white calibration using the image's own percentile sample.
ReflectanceImage normalize_white(const ReflectanceImage& img, double percentile = 0.99);

}  // namespace inkgrain
