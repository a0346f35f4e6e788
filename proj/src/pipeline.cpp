#include "inkgrain/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "inkgrain/colorimetry.hpp"
#include "inkgrain/error.hpp"
#include "inkgrain/segmentation.hpp"

namespace inkgrain {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

ReflectanceImage measure_reflectance(const RasterImage& img, double white) {
    return apply_white(luminance(img), white);
}

std::optional<double> blank_white_level(const std::vector<const RasterImage*>& blanks,
                                        double percentile) {
    if (blanks.empty()) return std::nullopt;
    double sum = 0.0;
    for (const RasterImage* b : blanks) sum += white_level(luminance(*b), percentile);
    return sum / static_cast<double>(blanks.size());
}

PatchAnalysis analyze_patch(const std::string& id, double cyan_level, double magenta_level,
                            const RasterImage& img, const AnalysisConfig& cfg,
                            std::optional<double> white, std::optional<LabelMap> labels) {
    LabelMap map = labels ? std::move(*labels) : segment_patch(img, cfg.segmentation);
    if (map.width() != img.width() || map.height() != img.height())
        throw ParameterError("label map for patch " + id + " does not match its image size");
    const ReflectanceImage lum = luminance(img);
    const double level = white ? *white : white_level(lum, cfg.white_percentile);
    ReflectanceImage refl = apply_white(lum, level);
    PatchRecord rec{id, cyan_level, magenta_level, coverage_ratios(map), refl.mean()};
    return PatchAnalysis{std::move(map), std::move(refl), std::move(rec)};
}

GrainReport mean_grain_report(const std::vector<GrainReport>& reports) {
    GrainReport out;
    std::array<double, 4> sum{};
    std::array<int, 4> n{};
    double recon_sum = 0.0;
    int recon_n = 0;
    for (const GrainReport& r : reports) {
        for (std::size_t k = 0; k < 4; ++k) {
            if (r.component[k]) {
                sum[k] += *r.component[k];
                ++n[k];
            }
        }
        if (r.reconstruction) {
            recon_sum += *r.reconstruction;
            ++recon_n;
        }
    }
    for (std::size_t k = 0; k < 4; ++k)
        if (n[k] > 0) out.component[k] = sum[k] / n[k];
    if (recon_n > 0) out.reconstruction = recon_sum / recon_n;
    return out;
}

}  // namespace inkgrain
