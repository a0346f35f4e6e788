#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "inkgrain/labels.hpp"

namespace inkgrain {

/// |a ∩ b| / |a ∪ b|; 1.0 when both masks are empty.
double iou(const BinaryMask& a, const BinaryMask& b);

/// Arithmetic mean of iou over the pairs (prediction, truth).
double mean_iou(std::span<const std::pair<BinaryMask, BinaryMask>> pairs);

/// Fraction of pixels with identical labels.
double pixel_accuracy(const LabelMap& pred, const LabelMap& truth);

struct MetricReport {
    std::array<double, 4> per_class_iou{};  ///< strict per-label IoU, indexed by Label
    double iou_cyan_incl_overlap = 0.0;     ///< (PC ∪ O) prediction vs truth
    double iou_magenta_incl_overlap = 0.0;  ///< (PM ∪ O) prediction vs truth
    double mean_iou = 0.0;                  ///< mean of the four strict per-class IoUs
    double pixel_accuracy = 0.0;
    /// confusion[truth][pred] pixel counts
    std::array<std::array<std::uint64_t, 4>, 4> confusion{};
};

MetricReport evaluate_labels(const LabelMap& pred, const LabelMap& truth);

}  // namespace inkgrain
