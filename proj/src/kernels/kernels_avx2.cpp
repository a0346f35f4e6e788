#include <immintrin.h>

#include "inkgrain/kernels.hpp"

namespace inkgrain::kernels {
namespace {

void squared_distances_3d(const double* q, const double* xs, const double* ys, const double* zs,
                          std::size_t n, double* out) {
    const __m256d qx = _mm256_set1_pd(q[0]);
    const __m256d qy = _mm256_set1_pd(q[1]);
    const __m256d qz = _mm256_set1_pd(q[2]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(qx, _mm256_loadu_pd(xs + i));
        const __m256d dy = _mm256_sub_pd(qy, _mm256_loadu_pd(ys + i));
        const __m256d dz = _mm256_sub_pd(qz, _mm256_loadu_pd(zs + i));
        const __m256d xy = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out + i, _mm256_add_pd(xy, _mm256_mul_pd(dz, dz)));
    }
    for (; i < n; ++i) {
        const double dx = q[0] - xs[i];
        const double dy = q[1] - ys[i];
        const double dz = q[2] - zs[i];
        out[i] = (dx * dx + dy * dy) + dz * dz;
    }
}

void box_mean_below(const double* top, const double* bottom, const double* values, std::size_t n,
                    std::size_t window, double inv_area, double offset, std::uint8_t* out) {
    const __m256d inv = _mm256_set1_pd(inv_area);
    const __m256d off = _mm256_set1_pd(offset);
    std::size_t x = 0;
    for (; x + 4 <= n; x += 4) {
        const __m256d right = _mm256_sub_pd(_mm256_loadu_pd(bottom + x + window),
                                            _mm256_loadu_pd(top + x + window));
        const __m256d left = _mm256_sub_pd(_mm256_loadu_pd(bottom + x), _mm256_loadu_pd(top + x));
        const __m256d mean = _mm256_mul_pd(_mm256_sub_pd(right, left), inv);
        const __m256d lt = _mm256_cmp_pd(_mm256_loadu_pd(values + x), _mm256_sub_pd(mean, off),
                                         _CMP_LT_OQ);
        const int bits = _mm256_movemask_pd(lt);
        out[x] = bits & 1;
        out[x + 1] = (bits >> 1) & 1;
        out[x + 2] = (bits >> 2) & 1;
        out[x + 3] = (bits >> 3) & 1;
    }
    for (; x < n; ++x) {
        const double right = bottom[x + window] - top[x + window];
        const double left = bottom[x] - top[x];
        const double mean = (right - left) * inv_area;
        out[x] = values[x] < mean - offset ? 1 : 0;
    }
}

void scale_complex(double* data, const double* gains, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // [g0 g0 g1 g1] against [re0 im0 re1 im1]
        const __m128d g = _mm_loadu_pd(gains + i);
        const __m256d gg = _mm256_permute4x64_pd(_mm256_castpd128_pd256(g), 0b01010000);
        _mm256_storeu_pd(data + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(data + 2 * i), gg));
    }
    for (; i < n; ++i) {
        data[2 * i] *= gains[i];
        data[2 * i + 1] *= gains[i];
    }
}

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

Moments centered_moments(const double* a, const double* b, std::size_t n, double ma, double mb) {
    const __m256d vma = _mm256_set1_pd(ma);
    const __m256d vmb = _mm256_set1_pd(mb);
    __m256d sab = _mm256_setzero_pd(), saa = _mm256_setzero_pd(), sbb = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d da = _mm256_sub_pd(_mm256_loadu_pd(a + i), vma);
        const __m256d db = _mm256_sub_pd(_mm256_loadu_pd(b + i), vmb);
        sab = _mm256_add_pd(sab, _mm256_mul_pd(da, db));
        saa = _mm256_add_pd(saa, _mm256_mul_pd(da, da));
        sbb = _mm256_add_pd(sbb, _mm256_mul_pd(db, db));
    }
    Moments m{hsum(sab), hsum(saa), hsum(sbb)};
    for (; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        m.sab += da * db;
        m.saa += da * da;
        m.sbb += db * db;
    }
    return m;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{"avx2", squared_distances_3d, box_mean_below, scale_complex,
                                   centered_moments};
    return table;
}

}  // namespace inkgrain::kernels
