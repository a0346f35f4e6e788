#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops. Each entry has a scalar reference and, where the
// target allows it, an AVX2 variant selected at runtime. Variants of
// `squared_distances_3d`, `box_mean_below` and `scale_complex` evaluate the
// same operations in the same order and are bit-identical to the scalar
// reference; `centered_moments` reassociates its sums.

namespace inkgrain::kernels {

struct Moments {
    double sab;  // sum (a - ma)(b - mb)
    double saa;  // sum (a - ma)^2
    double sbb;  // sum (b - mb)^2
};

struct KernelTable {
    std::string_view name;

    /// out[i] = ((q0-xs[i])^2 + (q1-ys[i])^2) + (q2-zs[i])^2
    void (*squared_distances_3d)(const double* q, const double* xs, const double* ys,
                                 const double* zs, std::size_t n, double* out);

    /// Box-window mean from two integral-image rows and a "darker than the
    /// mean by more than offset" test:
    /// mean = ((bottom[x+w] - top[x+w]) - (bottom[x] - top[x])) * inv_area
    /// out[x] = values[x] < mean - offset
    void (*box_mean_below)(const double* top, const double* bottom, const double* values,
                           std::size_t n, std::size_t window, double inv_area, double offset,
                           std::uint8_t* out);

    /// Interleaved complex data[2i], data[2i+1] both multiplied by gains[i].
    void (*scale_complex)(double* data, const double* gains, std::size_t n);

    Moments (*centered_moments)(const double* a, const double* b, std::size_t n, double mean_a,
                                double mean_b);
};

const KernelTable& scalar();

/// Null when the binary lacks AVX2 code or the CPU lacks AVX2.
const KernelTable* avx2();

/// Best table for this CPU. INKGRAIN_KERNELS=scalar forces the reference path.
const KernelTable& active();

}  // namespace inkgrain::kernels
