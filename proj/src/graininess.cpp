#include "inkgrain/graininess.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "inkgrain/error.hpp"
#include "inkgrain/kernels.hpp"

namespace inkgrain {
namespace {

constexpr double kMmPerInch = 25.4;
// Below this per-pixel variance a filtered image is treated as constant.
constexpr double kMinVariance = 1e-24;

// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {
        if (plan_ == nullptr) throw Error("FFTW failed to create a plan");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

void BandPassSpec::validate() const {
    if (!(f_lo > 0.0 && f_lo < f_hi && std::isfinite(f_hi)))
        throw ParameterError("band-pass cutoffs must satisfy 0 < f_lo < f_hi");
    if (order < 1) throw ParameterError("Butterworth order must be >= 1");
}

double butterworth_gain(double f, const BandPassSpec& spec) {
    if (!(f >= 0.0)) throw DomainError("frequency must be non-negative");
    if (f == 0.0) return 0.0;
    const double n2 = 2.0 * spec.order;
    const double low = 1.0 / std::sqrt(1.0 + std::pow(f / spec.f_hi, n2));
    const double high = 1.0 / std::sqrt(1.0 + std::pow(spec.f_lo / f, n2));
    return low * high;
}

Plane bandpass_filter(const Plane& img, const BandPassSpec& spec) {
    spec.validate();
    if (img.width() < 16 || img.height() < 16)
        throw ParameterError("band-pass filtering needs an image of at least 16x16");

    const int w = img.width();
    const int h = img.height();
    const int pw = w + (w % 2);
    const int ph = h + (h % 2);
    const int cw = pw / 2 + 1;
    const std::size_t real_n = static_cast<std::size_t>(pw) * ph;
    const std::size_t cplx_n = static_cast<std::size_t>(cw) * ph;

    auto real = fftw_buffer<double>(real_n);
    auto spectrum = fftw_buffer<fftw_complex>(cplx_n);

    std::unique_ptr<Plan> forward, inverse;
    {
        std::lock_guard lock(planner_mutex());
        forward = std::make_unique<Plan>(
            fftw_plan_dft_r2c_2d(ph, pw, real.get(), spectrum.get(), FFTW_ESTIMATE));
        inverse = std::make_unique<Plan>(
            fftw_plan_dft_c2r_2d(ph, pw, spectrum.get(), real.get(), FFTW_ESTIMATE));
    }

    const double fill = (pw != w || ph != h) ? img.mean() : 0.0;
    for (int y = 0; y < ph; ++y)
        for (int x = 0; x < pw; ++x)
            real[static_cast<std::size_t>(y) * pw + x] = (x < w && y < h) ? img.at(x, y) : fill;

    forward->execute();

    // Gains carry the 1/N of the unnormalized inverse transform.
    const double per_cycle = img.dpi() / kMmPerInch;
    const double norm = 1.0 / static_cast<double>(real_n);
    std::vector<double> gains(cplx_n);
    for (int v = 0; v < ph; ++v) {
        const int fv = v <= ph / 2 ? v : v - ph;
        const double fy = static_cast<double>(fv) / ph;
        for (int u = 0; u < cw; ++u) {
            const double fx = static_cast<double>(u) / pw;
            const double f_mm = std::sqrt(fx * fx + fy * fy) * per_cycle;
            gains[static_cast<std::size_t>(v) * cw + u] = butterworth_gain(f_mm, spec) * norm;
        }
    }
    kernels::active().scale_complex(reinterpret_cast<double*>(spectrum.get()), gains.data(), cplx_n);

    inverse->execute();

    std::vector<double> out(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out[static_cast<std::size_t>(y) * w + x] = real[static_cast<std::size_t>(y) * pw + x];
    return Plane(w, h, img.dpi(), std::move(out));
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ParameterError("pearson of inputs with different sizes");
    if (a.size() < 2) throw DegenerateError("pearson needs at least two samples");
    const double n = static_cast<double>(a.size());
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
    }
    const auto m = kernels::active().centered_moments(a.data(), b.data(), a.size(), sa / n, sb / n);
    if (m.saa / n <= kMinVariance || m.sbb / n <= kMinVariance)
        throw DegenerateError("pearson correlation undefined for a zero-variance input");
    return std::clamp(m.sab / std::sqrt(m.saa * m.sbb), -1.0, 1.0);
}

double pearson(const Plane& a, const Plane& b) {
    if (!a.same_shape(b)) throw ParameterError("pearson of images with different sizes");
    return pearson(a.samples(), b.samples());
}

GrainReport component_grain_correlations(const LabelMap& labels, const ReflectanceImage& reflectance,
                                         const ReflectanceModel& model, const BandPassSpec& spec) {
    if (labels.width() != reflectance.width() || labels.height() != reflectance.height())
        throw ParameterError("label map and reflectance image differ in size");

    GrainReport report;
    const Plane target = bandpass_filter(reflectance, spec);
    const auto counts = labels.counts();
    for (Label l : kAllLabels) {
        const std::size_t c = counts[index_of(l)];
        if (c == 0 || c == labels.size()) continue;
        std::vector<double> ind(labels.size());
        for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = labels.get(i) == l ? 1.0 : 0.0;
        const Plane mask(labels.width(), labels.height(), reflectance.dpi(), std::move(ind));
        try {
            report.component[index_of(l)] = pearson(bandpass_filter(mask, spec), target);
        } catch (const DegenerateError&) {
        }
    }
    try {
        const Plane recon = reconstruct_reflectance(labels, model, reflectance.dpi());
        report.reconstruction = pearson(bandpass_filter(recon, spec), target);
    } catch (const DegenerateError&) {
    }
    return report;
}

}  // namespace inkgrain
