#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "inkgrain/labels.hpp"
#include "inkgrain/raster.hpp"

namespace inkgrain {

/// Pipeline tunables. Defaults assume 8000 dpi scans of ~30 um drops.
struct SegmentationParams {
    double contrast_lo = 0.01;       ///< lower stretch percentile
    double contrast_hi = 0.99;       ///< upper stretch percentile
    int window = 19;                 ///< adaptive-threshold window side, odd
    double offset = 0.04;            ///< adaptive-threshold bias, enhanced units
    int k = 5;                       ///< KNN neighbour count, odd
    double confidence_margin = 0.05; ///< distance from Otsu threshold below which a pixel is ambiguous
    int max_exemplars = 50000;       ///< KNN exemplar subsample cap
    /// Minimum gap between the two Otsu class means, in raw storage units, for
    /// a channel to count as carrying ink at all.
    double min_ink_contrast = 0.1;
    std::uint64_t seed = 42;         ///< exemplar subsample seed

    /// Throws ParameterError on the first violated invariant.
    void validate() const;
};

/// Per-channel percentile stretch, clamped. Constant channels pass through.
RasterImage enhance_contrast(const RasterImage& img, double lo, double hi);

/// Local mean-minus-offset threshold over a `window` x `window` box with edge
/// replication. A pixel is set when it is darker than its surroundings.
BinaryMask adaptive_threshold(const Plane& channel, int window, double offset);

/// Otsu split of a histogram with `bins` equal bins spanning [min, max] of
/// the values. Returns the centre of the last bin of the dark class.
double otsu_threshold(std::span<const double> values, int bins = 256);

/// Otsu on a prebuilt histogram. Returns the split index s in [1, bins-1]:
/// bins [0, s) form the dark class. When several splits reach the maximal
/// between-class variance (compared exactly), the plateau centre
/// floor(mean of the maximizing indices) is taken.
int otsu_split(std::span<const std::uint64_t> histogram);

struct Histogram {
    std::vector<std::uint64_t> counts;
    double lo = 0.0;
    double bin_width = 0.0;

    double bin_center(int b) const noexcept { return lo + (b + 0.5) * bin_width; }
};

/// Equal-width histogram over [min, max]; throws DegenerateError when all
/// values agree.
Histogram build_histogram(std::span<const double> values, int bins);

using Feature = std::array<double, 3>;

struct Exemplar {
    Feature feature;
    int label;
};

/// Majority vote among the k nearest exemplars (Euclidean). Neighbours are
/// ranked by (distance, input position); a tied vote goes to the class of the
/// best-ranked neighbour among the tied classes.
std::vector<int> knn_refine(std::span<const Feature> ambiguous, std::span<const Exemplar> confident,
                            int k);

/// PC = cyan only, PM = magenta only, O = both, W = neither.
LabelMap fuse_channels(const BinaryMask& cyan, const BinaryMask& magenta);

/// Intermediate products of one channel, exposed for diagnostics.
struct ChannelSegmentation {
    BinaryMask raw;       ///< adaptive threshold output
    BinaryMask refined;   ///< after Otsu/KNN refinement
    double otsu = 0.0;    ///< threshold in enhanced units
    bool has_ink = false; ///< false when the channel failed the contrast floor
    std::size_t ambiguous = 0;
};

/// Segments one ink from a channel. `channel_index` selects the channel of
/// `enhanced` that the ink absorbs; `features` are linearized RGB per pixel.
ChannelSegmentation segment_channel(const RasterImage& original, const RasterImage& enhanced,
                                    int channel_index, std::span<const Feature> features,
                                    const SegmentationParams& params);

/// Full pipeline: contrast stretch, adaptive threshold on red (cyan) and
/// green (magenta), Otsu/KNN refinement, fusion.
LabelMap segment_patch(const RasterImage& img, const SegmentationParams& params = {});

/// Linearized RGB for every pixel.
std::vector<Feature> linear_features(const RasterImage& img);

}  // namespace inkgrain
