#include "inkgrain/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "inkgrain/colorimetry.hpp"
#include "inkgrain/error.hpp"
#include "inkgrain/segmentation.hpp"

namespace inkgrain {
namespace {

constexpr double kMmPerInch = 25.4;
// Nominal drop centres snap to the printer's addressable grid.
constexpr double kAddressabilityDpi = 1200.0;
constexpr int kMaxAvoidanceAttempts = 10;
// Same floor as the segmentation default: a narrower Otsu class gap is noise.
constexpr double kMinGroundTruthContrast = 0.1;

constexpr std::array<double, 3> kCyanTransmit{0.2, 0.9, 0.95};
constexpr std::array<double, 3> kMagentaTransmit{0.9, 0.2, 0.6};

enum Stream : std::uint64_t { kCyanStream = 1, kMagentaStream = 2, kNoiseStream = 3 };

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

struct Drop {
    double x, y;  // centre in pixels
    double radius_px;
};

class DropPlacer {
public:
    DropPlacer(const SimConfig& cfg, std::mt19937_64& rng)
        : rng_(rng),
          width_(cfg.width_px()),
          height_(cfg.height_px()),
          px_per_um_(cfg.dpi / kMmPerInch / 1000.0),
          address_px_(cfg.dpi / kAddressabilityDpi),
          cols_(std::max(1, static_cast<int>(std::floor(width_ / address_px_)))),
          rows_(std::max(1, static_cast<int>(std::floor(height_ / address_px_)))),
          jitter_(0.0, cfg.placement_jitter_um * px_per_um_),
          col_(0, cols_ - 1),
          row_(0, rows_ - 1) {
        const double cv2 = cfg.diameter_cv * cfg.diameter_cv;
        const double sigma = std::sqrt(std::log1p(cv2));
        const double mu = std::log(cfg.drop_diameter_um) - 0.5 * sigma * sigma;
        diameter_ = std::lognormal_distribution<double>(mu, sigma);
    }

    std::pair<double, double> centre() {
        const double x = (col_(rng_) + 0.5) * width_ / cols_ + jitter_(rng_);
        const double y = (row_(rng_) + 0.5) * height_ / rows_ + jitter_(rng_);
        return {wrap(x, width_), wrap(y, height_)};
    }

    double radius() { return 0.5 * diameter_(rng_) * px_per_um_; }

private:
    static double wrap(double v, double period) {
        v = std::fmod(v, period);
        return v < 0.0 ? v + period : v;
    }

    std::mt19937_64& rng_;
    double width_, height_;
    double px_per_um_;
    double address_px_;
    int cols_, rows_;
    std::normal_distribution<double> jitter_;
    std::uniform_int_distribution<int> col_, row_;
    std::lognormal_distribution<double> diameter_;
};

// Bucket grid over cyan centres for the avoidance test, periodic in both axes.
class CentreIndex {
public:
    CentreIndex(const std::vector<Drop>& drops, double width, double height, double cell)
        : width_(width), height_(height) {
        nx_ = std::max(1, static_cast<int>(width / cell));
        ny_ = std::max(1, static_cast<int>(height / cell));
        buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (const Drop& d : drops) buckets_[bucket(d.x, d.y)].push_back({d.x, d.y});
    }

    bool any_within(double x, double y, double radius) const {
        const int cx = cell_x(x), cy = cell_y(y);
        const double r2 = radius * radius;
        const int reach_x = std::min(nx_ / 2, 1 + static_cast<int>(radius / (width_ / nx_)));
        const int reach_y = std::min(ny_ / 2, 1 + static_cast<int>(radius / (height_ / ny_)));
        for (int dy = -reach_y; dy <= reach_y; ++dy) {
            for (int dx = -reach_x; dx <= reach_x; ++dx) {
                const int bx = ((cx + dx) % nx_ + nx_) % nx_;
                const int by = ((cy + dy) % ny_ + ny_) % ny_;
                for (const auto& [px, py] : buckets_[static_cast<std::size_t>(by) * nx_ + bx]) {
                    const double ddx = periodic_delta(x - px, width_);
                    const double ddy = periodic_delta(y - py, height_);
                    if (ddx * ddx + ddy * ddy < r2) return true;
                }
            }
        }
        return false;
    }

private:
    static double periodic_delta(double d, double period) {
        d = std::fmod(d, period);
        if (d > 0.5 * period) d -= period;
        if (d < -0.5 * period) d += period;
        return d;
    }
    int cell_x(double x) const { return std::min(nx_ - 1, static_cast<int>(x / width_ * nx_)); }
    int cell_y(double y) const { return std::min(ny_ - 1, static_cast<int>(y / height_ * ny_)); }
    std::size_t bucket(double x, double y) const {
        return static_cast<std::size_t>(cell_y(y)) * nx_ + cell_x(x);
    }

    double width_, height_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::pair<double, double>>> buckets_;
};

void rasterize(const std::vector<Drop>& drops, BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    for (const Drop& d : drops) {
        const int x0 = static_cast<int>(std::floor(d.x - d.radius_px - 0.5));
        const int x1 = static_cast<int>(std::ceil(d.x + d.radius_px - 0.5));
        const int y0 = static_cast<int>(std::floor(d.y - d.radius_px - 0.5));
        const int y1 = static_cast<int>(std::ceil(d.y + d.radius_px - 0.5));
        const double r2 = d.radius_px * d.radius_px;
        for (int y = y0; y <= y1; ++y) {
            const double dy = (y + 0.5) - d.y;
            const int wy = ((y % h) + h) % h;
            for (int x = x0; x <= x1; ++x) {
                const double dx = (x + 0.5) - d.x;
                if (dx * dx + dy * dy <= r2) mask.set(((x % w) + w) % w, wy, true);
            }
        }
    }
}

double mean_drop_area_px(const SimConfig& cfg) {
    const double d_px = cfg.drop_diameter_um * cfg.dpi / kMmPerInch / 1000.0;
    return std::numbers::pi / 4.0 * d_px * d_px * (1.0 + cfg.diameter_cv * cfg.diameter_cv);
}

}  // namespace

void SimConfig::validate() const {
    if (!(cyan_level >= 0.0 && cyan_level <= 1.0) || !(magenta_level >= 0.0 && magenta_level <= 1.0))
        throw ParameterError("ink levels must lie in [0,1]");
    if (cyan_level >= 1.0 || magenta_level >= 1.0)
        throw ParameterError("ink level 1 has no finite drop count under random placement");
    if (!(dpi > 0.0) || !(patch_width_mm > 0.0) || !(patch_height_mm > 0.0) ||
        !(drop_diameter_um > 0.0))
        throw ParameterError("dpi, patch size and drop diameter must be positive");
    if (!(diameter_cv >= 0.0) || !(placement_jitter_um >= 0.0) || !(noise_sigma >= 0.0))
        throw ParameterError("diameter_cv, placement_jitter_um and noise_sigma must be >= 0");
    if (!(avoidance >= 0.0 && avoidance <= 1.0)) throw ParameterError("avoidance must lie in [0,1]");
    if (width_px() < 1 || height_px() < 1) throw ParameterError("patch smaller than one pixel");
}

int SimConfig::width_px() const {
    return static_cast<int>(std::lround(patch_width_mm / kMmPerInch * dpi));
}
int SimConfig::height_px() const {
    return static_cast<int>(std::lround(patch_height_mm / kMmPerInch * dpi));
}

double drop_count_for_level(double level, double patch_area, double drop_area) {
    if (!(level >= 0.0 && level < 1.0))
        throw ParameterError("coverage level must lie in [0,1) for a finite drop count");
    // 1 - exp(-n a / A) = level
    return -std::log1p(-level) * patch_area / drop_area;
}

SimulatedPatch simulate_patch(const SimConfig& cfg) {
    cfg.validate();
    const int w = cfg.width_px();
    const int h = cfg.height_px();
    const double patch_area = static_cast<double>(w) * h;
    const double drop_area = mean_drop_area_px(cfg);
    const auto n_cyan =
        static_cast<std::size_t>(std::lround(drop_count_for_level(cfg.cyan_level, patch_area, drop_area)));
    const auto n_magenta = static_cast<std::size_t>(
        std::lround(drop_count_for_level(cfg.magenta_level, patch_area, drop_area)));

    auto cyan_rng = make_rng(cfg.seed, kCyanStream);
    DropPlacer cyan_placer(cfg, cyan_rng);
    std::vector<Drop> cyan(n_cyan);
    for (Drop& d : cyan) {
        auto [x, y] = cyan_placer.centre();
        d = Drop{x, y, cyan_placer.radius()};
    }

    auto magenta_rng = make_rng(cfg.seed, kMagentaStream);
    DropPlacer magenta_placer(cfg, magenta_rng);
    const double mean_radius_px = 0.5 * cfg.drop_diameter_um * cfg.dpi / kMmPerInch / 1000.0;
    const CentreIndex cyan_index(cyan, w, h, std::max(1.0, mean_radius_px));
    std::bernoulli_distribution avoid(cfg.avoidance);
    std::vector<Drop> magenta(n_magenta);
    for (Drop& d : magenta) {
        auto [x, y] = magenta_placer.centre();
        if (!cyan.empty() && avoid(magenta_rng)) {
            for (int attempt = 0;
                 attempt < kMaxAvoidanceAttempts && cyan_index.any_within(x, y, mean_radius_px);
                 ++attempt)
                std::tie(x, y) = magenta_placer.centre();
        }
        d = Drop{x, y, magenta_placer.radius()};
    }

    BinaryMask cyan_mask(w, h), magenta_mask(w, h);
    rasterize(cyan, cyan_mask);
    rasterize(magenta, magenta_mask);
    LabelMap truth = fuse_channels(cyan_mask, magenta_mask);

    auto noise_rng = make_rng(cfg.seed, kNoiseStream);
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
    std::vector<double> samples(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool c = cyan_mask.get(i);
        const bool m = magenta_mask.get(i);
        for (int ch = 0; ch < 3; ++ch) {
            double v = 1.0;
            if (c) v *= kCyanTransmit[ch];
            if (m) v *= kMagentaTransmit[ch];
            if (cfg.noise_sigma > 0.0) v += noise(noise_rng);
            samples[3 * i + ch] = linear_to_srgb(std::clamp(v, 0.0, 1.0));
        }
    }
    return SimulatedPatch{RasterImage(w, h, cfg.dpi, std::move(samples)), std::move(truth)};
}

RasterImage synthesize_superimposed(const RasterImage& cyan_img, const RasterImage& magenta_img) {
    if (!cyan_img.same_shape(magenta_img))
        throw ParameterError("superimposed inputs differ in size");
    if (cyan_img.dpi() != magenta_img.dpi())
        throw ParameterError("superimposed inputs differ in dpi");
    const auto a = cyan_img.samples();
    const auto b = magenta_img.samples();
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double mixed = 0.5 * srgb_to_linear(a[i]) + 0.5 * srgb_to_linear(b[i]);
        out[i] = std::clamp(linear_to_srgb(std::min(1.0, mixed)), 0.0, 1.0);
    }
    return RasterImage(cyan_img.width(), cyan_img.height(), cyan_img.dpi(), std::move(out));
}

BinaryMask ground_truth_from_single_color(const RasterImage& img, InkChannel channel,
                                          std::optional<double> threshold) {
    const std::vector<double> values = img.channel(static_cast<int>(channel));
    double t = 0.0;
    if (threshold) {
        if (!(*threshold > 0.0 && *threshold < 1.0))
            throw ParameterError("ground-truth threshold must lie in (0,1)");
        t = *threshold;
    } else {
        t = otsu_threshold(values);  // DegenerateError on a constant channel
        // A split of pure sensor noise is not ink.
        double dark = 0.0, light = 0.0;
        std::size_t n_dark = 0;
        for (double v : values) {
            if (v < t) {
                dark += v;
                ++n_dark;
            } else {
                light += v;
            }
        }
        const std::size_t n_light = values.size() - n_dark;
        if (n_dark == 0 || n_light == 0 ||
            light / static_cast<double>(n_light) - dark / static_cast<double>(n_dark) <
                kMinGroundTruthContrast)
            return BinaryMask(img.width(), img.height());
    }
    BinaryMask mask(img.width(), img.height());
    for (std::size_t i = 0; i < values.size(); ++i) mask.set(i, values[i] < t);
    return mask;
}

}  // namespace inkgrain
