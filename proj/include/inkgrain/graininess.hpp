#pragma once

#include <array>
#include <optional>
#include <span>

#include "inkgrain/labels.hpp"
#include "inkgrain/raster.hpp"
#include "inkgrain/reflectance_model.hpp"

namespace inkgrain {

/// Graininess band in cycles/mm and the Butterworth order of both skirts.
struct BandPassSpec {
    double f_lo = 1.0;
    double f_hi = 10.0;
    int order = 2;

    void validate() const;
};

/// |H(f)| of a Butterworth low-pass at f_hi times a high-pass at f_lo; zero at DC.
double butterworth_gain(double f, const BandPassSpec& spec);

/// Frequency-domain band-pass. Bin (u, v) sits at
/// sqrt((u/W)^2 + (v/H)^2) * dpi / 25.4 cycles/mm. Odd dimensions are padded
/// with the image mean to even size and cropped back afterwards.
Plane bandpass_filter(const Plane& img, const BandPassSpec& spec);

/// Pearson product-moment correlation over all pixels. Throws
/// DegenerateError when either input has (numerically) zero variance.
double pearson(std::span<const double> a, std::span<const double> b);
double pearson(const Plane& a, const Plane& b);

/// Per-patch attribution of band-passed reflectance to the components.
struct GrainReport {
    /// Indexed by Label; empty when the component is absent or fills the patch.
    std::array<std::optional<double>, 4> component{};
    std::optional<double> reconstruction;
};

GrainReport component_grain_correlations(const LabelMap& labels, const ReflectanceImage& reflectance,
                                         const ReflectanceModel& model, const BandPassSpec& spec);

}  // namespace inkgrain
