#pragma once

#include <span>
#include <string>
#include <vector>

#include "inkgrain/labels.hpp"
#include "inkgrain/raster.hpp"

namespace inkgrain {

/// Area fractions of the four components; they sum to one.
struct CoverageRatios {
    double a_pc = 0.0;
    double a_pm = 0.0;
    double a_o = 0.0;
    double a_w = 1.0;

    double sum() const noexcept { return a_pc + a_pm + a_o + a_w; }
};

/// Fitted component reflectances.
struct ReflectanceModel {
    double r_pc = 0.0;
    double r_pm = 0.0;
    double r_o = 0.0;
    double r_w = 0.0;
    double residual_rms = 0.0;
    int n_patches = 0;
    /// Non-fatal diagnostics: coefficients outside [0,1], white not the largest.
    std::vector<std::string> warnings;

    double reflectance_of(Label l) const noexcept;
};

struct PatchRecord {
    std::string id;
    double cyan_level = 0.0;     ///< percent
    double magenta_level = 0.0;  ///< percent
    CoverageRatios coverage;
    double total_reflectance = 0.0;
};

CoverageRatios coverage_ratios(const LabelMap& labels);

/// Singular-value ratio above which the coverage design is treated as rank deficient.
inline constexpr double kMaxConditionNumber = 1e10;

/// Unconstrained least squares of total reflectance on the four coverage
/// columns, no intercept. Needs at least four records spanning rank 4.
ReflectanceModel fit_reflectance_model(std::span<const PatchRecord> records);

double predict_total_reflectance(const CoverageRatios& c, const ReflectanceModel& m);

/// Piecewise-constant image holding each pixel's component reflectance.
/// Coefficients are used as fitted (not clamped), so the result is a Plane.
Plane reconstruct_reflectance(const LabelMap& labels, const ReflectanceModel& m, double dpi);

}  // namespace inkgrain
