#include "inkgrain/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "inkgrain/colorimetry.hpp"
#include "inkgrain/error.hpp"
#include "inkgrain/kernels.hpp"

namespace inkgrain {

void SegmentationParams::validate() const {
    if (!(contrast_lo >= 0.0 && contrast_lo < contrast_hi && contrast_hi <= 1.0))
        throw ParameterError("contrast percentiles must satisfy 0 <= lo < hi <= 1");
    if (window < 3 || window % 2 == 0) throw ParameterError("window must be odd and >= 3");
    if (k < 1 || k % 2 == 0) throw ParameterError("k must be odd and >= 1");
    if (!(confidence_margin >= 0.0)) throw ParameterError("confidence_margin must be >= 0");
    if (max_exemplars < 1) throw ParameterError("max_exemplars must be >= 1");
    if (!(min_ink_contrast >= 0.0)) throw ParameterError("min_ink_contrast must be >= 0");
}

RasterImage enhance_contrast(const RasterImage& img, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
        throw ParameterError("contrast percentiles must satisfy 0 <= lo < hi <= 1");
    std::vector<double> out(img.samples().begin(), img.samples().end());
    for (int c = 0; c < RasterImage::kChannels; ++c) {
        const std::vector<double> ch = img.channel(c);
        const double plo = percentile(ch, lo);
        const double phi = percentile(ch, hi);
        if (!(phi > plo)) continue;
        const double scale = 1.0 / (phi - plo);
        for (std::size_t i = 0; i < ch.size(); ++i)
            out[i * 3 + c] = std::clamp((ch[i] - plo) * scale, 0.0, 1.0);
    }
    return RasterImage(img.width(), img.height(), img.dpi(), std::move(out));
}

BinaryMask adaptive_threshold(const Plane& channel, int window, double offset) {
    const int w = channel.width();
    const int h = channel.height();
    if (window < 3 || window % 2 == 0)
        throw ParameterError("adaptive window must be odd and >= 3, got " + std::to_string(window));
    if (window > std::min(w, h))
        throw ParameterError("adaptive window " + std::to_string(window) +
                             " exceeds the image's smaller side");

    const int r = window / 2;
    const int pw = w + 2 * r;
    const int ph = h + 2 * r;
    const std::size_t stride = static_cast<std::size_t>(pw) + 1;

    // Integral image of the edge-replicated plane, with a leading zero row and column.
    std::vector<double> integral(stride * (static_cast<std::size_t>(ph) + 1), 0.0);
    for (int py = 0; py < ph; ++py) {
        const int sy = std::clamp(py - r, 0, h - 1);
        double row = 0.0;
        const double* above = integral.data() + static_cast<std::size_t>(py) * stride;
        double* cur = integral.data() + static_cast<std::size_t>(py + 1) * stride;
        for (int px = 0; px < pw; ++px) {
            const int sx = std::clamp(px - r, 0, w - 1);
            row += channel.at(sx, sy);
            cur[px + 1] = above[px + 1] + row;
        }
    }

    const auto& k = kernels::active();
    const double inv_area = 1.0 / (static_cast<double>(window) * window);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        const double* top = integral.data() + static_cast<std::size_t>(y) * stride;
        const double* bottom = integral.data() + static_cast<std::size_t>(y + window) * stride;
        k.box_mean_below(top, bottom, channel.samples().data() + static_cast<std::size_t>(y) * w,
                         static_cast<std::size_t>(w), static_cast<std::size_t>(window), inv_area,
                         offset, bits.data() + static_cast<std::size_t>(y) * w);
    }
    return BinaryMask(w, h, std::move(bits));
}

LabelMap fuse_channels(const BinaryMask& cyan, const BinaryMask& magenta) {
    if (!cyan.same_shape(magenta)) throw ParameterError("cannot fuse masks of different sizes");
    std::vector<Label> labels(cyan.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool c = cyan.get(i);
        const bool m = magenta.get(i);
        labels[i] = c ? (m ? Label::O : Label::PC) : (m ? Label::PM : Label::W);
    }
    return LabelMap(cyan.width(), cyan.height(), std::move(labels));
}

std::vector<Feature> linear_features(const RasterImage& img) {
    std::vector<Feature> f(img.pixel_count());
    const auto s = img.samples();
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = {srgb_to_linear(s[3 * i]), srgb_to_linear(s[3 * i + 1]),
                srgb_to_linear(s[3 * i + 2])};
    return f;
}

ChannelSegmentation segment_channel(const RasterImage& original, const RasterImage& enhanced,
                                    int channel_index, std::span<const Feature> features,
                                    const SegmentationParams& params) {
    const int w = enhanced.width();
    const int h = enhanced.height();
    const std::vector<double> values = enhanced.channel(channel_index);
    const std::vector<double> raw_values = original.channel(channel_index);
    const Plane plane(w, h, enhanced.dpi(), values);

    ChannelSegmentation out{adaptive_threshold(plane, params.window, params.offset),
                            BinaryMask(w, h), 0.0, false, 0};

    Histogram hist;
    try {
        hist = build_histogram(values, 256);
    } catch (const DegenerateError&) {
        return out;  // flat channel: no ink
    }
    out.otsu = hist.bin_center(otsu_split(hist.counts) - 1);

    // Contrast floor on the raw channel guards against the stretch inflating
    // the faint cross-absorption of the other ink into a spurious split.
    double dark_sum = 0.0, light_sum = 0.0;
    std::size_t dark_n = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < out.otsu) {
            dark_sum += raw_values[i];
            ++dark_n;
        } else {
            light_sum += raw_values[i];
        }
    }
    const std::size_t light_n = values.size() - dark_n;
    if (dark_n == 0 || light_n == 0) return out;
    const double gap = light_sum / static_cast<double>(light_n) - dark_sum / static_cast<double>(dark_n);
    if (gap < params.min_ink_contrast) return out;
    out.has_ink = true;

    std::vector<Exemplar> confident;
    std::vector<std::size_t> ambiguous_idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - out.otsu;
        const bool ink = d < 0.0;
        out.refined.set(i, ink);
        // The local detector is positive evidence only: inside large uniform
        // ink areas it stays silent, so silence never contradicts Otsu.
        if (std::abs(d) < params.confidence_margin || (out.raw.get(i) && !ink))
            ambiguous_idx.push_back(i);
        else
            confident.push_back(Exemplar{features[i], ink ? 1 : 0});
    }
    out.ambiguous = ambiguous_idx.size();
    if (ambiguous_idx.empty() || confident.empty()) return out;

    if (confident.size() > static_cast<std::size_t>(params.max_exemplars)) {
        std::vector<Exemplar> subset;
        subset.reserve(static_cast<std::size_t>(params.max_exemplars));
        std::mt19937_64 rng(params.seed + static_cast<std::uint64_t>(channel_index));
        std::sample(confident.begin(), confident.end(), std::back_inserter(subset),
                    params.max_exemplars, rng);
        confident = std::move(subset);
    }

    std::vector<Feature> queries(ambiguous_idx.size());
    for (std::size_t j = 0; j < ambiguous_idx.size(); ++j) queries[j] = features[ambiguous_idx[j]];
    const int k = std::min(params.k, static_cast<int>(confident.size()));
    const std::vector<int> labels = knn_refine(queries, confident, k);
    for (std::size_t j = 0; j < ambiguous_idx.size(); ++j)
        out.refined.set(ambiguous_idx[j], labels[j] == 1);
    return out;
}

LabelMap segment_patch(const RasterImage& img, const SegmentationParams& params) {
    params.validate();
    const RasterImage enhanced = enhance_contrast(img, params.contrast_lo, params.contrast_hi);
    const std::vector<Feature> features = linear_features(img);
    // Cyan absorbs red, magenta absorbs green.
    const ChannelSegmentation cyan = segment_channel(img, enhanced, 0, features, params);
    const ChannelSegmentation magenta = segment_channel(img, enhanced, 1, features, params);
    return fuse_channels(cyan.refined, magenta.refined);
}

}  // namespace inkgrain
