#include "inkgrain/metrics.hpp"

#include "inkgrain/error.hpp"

namespace inkgrain {

double iou(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) throw ParameterError("IoU of masks with different sizes");
    std::size_t inter = 0, uni = 0;
    const auto ab = a.bits();
    const auto bb = b.bits();
    for (std::size_t i = 0; i < ab.size(); ++i) {
        inter += ab[i] & bb[i];
        uni += ab[i] | bb[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double mean_iou(std::span<const std::pair<BinaryMask, BinaryMask>> pairs) {
    if (pairs.empty()) throw ParameterError("mean IoU of an empty mask list");
    double sum = 0.0;
    for (const auto& [pred, truth] : pairs) sum += iou(pred, truth);
    return sum / static_cast<double>(pairs.size());
}

double pixel_accuracy(const LabelMap& pred, const LabelMap& truth) {
    if (!pred.same_shape(truth)) throw ParameterError("pixel accuracy of maps with different sizes");
    std::size_t same = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) same += pred.get(i) == truth.get(i);
    return static_cast<double>(same) / static_cast<double>(pred.size());
}

MetricReport evaluate_labels(const LabelMap& pred, const LabelMap& truth) {
    if (!pred.same_shape(truth)) throw ParameterError("cannot evaluate maps with different sizes");
    MetricReport r;
    for (std::size_t i = 0; i < pred.size(); ++i)
        ++r.confusion[index_of(truth.get(i))][index_of(pred.get(i))];

    std::vector<std::pair<BinaryMask, BinaryMask>> pairs;
    for (Label l : kAllLabels) pairs.emplace_back(pred.indicator(l), truth.indicator(l));
    for (Label l : kAllLabels) {
        const auto& [p, t] = pairs[index_of(l)];
        r.per_class_iou[index_of(l)] = iou(p, t);
    }
    r.mean_iou = mean_iou(pairs);
    r.iou_cyan_incl_overlap = iou(pred.cyan_mask(), truth.cyan_mask());
    r.iou_magenta_incl_overlap = iou(pred.magenta_mask(), truth.magenta_mask());
    r.pixel_accuracy = pixel_accuracy(pred, truth);
    return r;
}

}  // namespace inkgrain
