#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "inkgrain/labels.hpp"
#include "inkgrain/raster.hpp"

namespace inkgrain {

/// Drop simulator configuration. Lengths in mm or um as named.
struct SimConfig {
    double cyan_level = 0.0;     ///< expected cyan area coverage, [0,1)
    double magenta_level = 0.0;  ///< expected magenta area coverage, [0,1)
    double dpi = 8000.0;
    double patch_width_mm = 3.2;
    double patch_height_mm = 2.4;
    double drop_diameter_um = 30.0;
    double diameter_cv = 0.1;
    double placement_jitter_um = 10.0;
    /// Probability that a magenta drop landing within one mean drop radius of
    /// a cyan centre is re-aimed. A phenomenological stand-in for ink-ink
    /// repulsion, not a physical model.
    double avoidance = 0.5;
    double noise_sigma = 0.01;  ///< additive Gaussian noise, linear-light units
    std::uint64_t seed = 42;

    void validate() const;
    int width_px() const;
    int height_px() const;
};

struct SimulatedPatch {
    RasterImage image;
    LabelMap truth;
};

/// Simulated scan of a periodic (toroidal) patch with its exact label truth.
SimulatedPatch simulate_patch(const SimConfig& cfg);

/// Drops needed for `level` expected coverage of `patch_area` by discs of
/// mean area `drop_area` under uniform random placement.
double drop_count_for_level(double level, double patch_area, double drop_area);

/// Equal-transparency (alpha 0.5) fusion in linear light.
RasterImage synthesize_superimposed(const RasterImage& cyan_img, const RasterImage& magenta_img);

enum class InkChannel { Red = 0, Green = 1 };

/// Ink where the channel value is below `threshold`; Otsu on the channel when absent.
BinaryMask ground_truth_from_single_color(const RasterImage& img, InkChannel channel,
                                          std::optional<double> threshold = std::nullopt);

}  // namespace inkgrain
