#include "inkgrain/kernels.hpp"

namespace inkgrain::kernels {
namespace {

void squared_distances_3d(const double* q, const double* xs, const double* ys, const double* zs,
                          std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = q[0] - xs[i];
        const double dy = q[1] - ys[i];
        const double dz = q[2] - zs[i];
        out[i] = (dx * dx + dy * dy) + dz * dz;
    }
}

void box_mean_below(const double* top, const double* bottom, const double* values, std::size_t n,
                    std::size_t window, double inv_area, double offset, std::uint8_t* out) {
    for (std::size_t x = 0; x < n; ++x) {
        const double right = bottom[x + window] - top[x + window];
        const double left = bottom[x] - top[x];
        const double mean = (right - left) * inv_area;
        out[x] = values[x] < mean - offset ? 1 : 0;
    }
}

void scale_complex(double* data, const double* gains, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        data[2 * i] *= gains[i];
        data[2 * i + 1] *= gains[i];
    }
}

Moments centered_moments(const double* a, const double* b, std::size_t n, double ma, double mb) {
    Moments m{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        m.sab += da * db;
        m.saa += da * da;
        m.sbb += db * db;
    }
    return m;
}

}  // namespace

const KernelTable& scalar() {
    static const KernelTable table{"scalar", squared_distances_3d, box_mean_below, scale_complex,
                                   centered_moments};
    return table;
}

}  // namespace inkgrain::kernels
