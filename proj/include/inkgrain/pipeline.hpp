#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "inkgrain/config.hpp"
#include "inkgrain/graininess.hpp"
#include "inkgrain/labels.hpp"
#include "inkgrain/raster.hpp"
#include "inkgrain/reflectance_model.hpp"

namespace inkgrain {

/// Runs fn(0..n-1) on up to `jobs` threads. Exceptions are rethrown after
/// all workers finish; the one from the lowest index wins.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Calibrated reflectance: luminance divided by the paper-white level.
ReflectanceImage measure_reflectance(const RasterImage& img, double white);

/// Paper white for a dataset: the mean percentile level of its blank
/// (0% / 0%) patches. Empty when the dataset has no blank patch.
std::optional<double> blank_white_level(const std::vector<const RasterImage*>& blanks,
                                        double percentile);

struct PatchAnalysis {
    LabelMap labels;
    ReflectanceImage reflectance;
    PatchRecord record;
};

/// Segments (unless `labels` is supplied) and measures one patch. `white`
/// falls back to the patch's own percentile when empty.
PatchAnalysis analyze_patch(const std::string& id, double cyan_level, double magenta_level,
                            const RasterImage& img, const AnalysisConfig& cfg,
                            std::optional<double> white, std::optional<LabelMap> labels = {});

/// Mean over defined coefficients per component; empty where no patch defines one.
GrainReport mean_grain_report(const std::vector<GrainReport>& reports);

}  // namespace inkgrain
