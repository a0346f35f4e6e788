#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>

#include "inkgrain/error.hpp"
#include "inkgrain/segmentation.hpp"

namespace inkgrain {
namespace {

using boost::multiprecision::int256_t;

// Between-class variance of split s, up to the constant factor 1/N^2, held as
// the exact fraction num/den = (N0*S1 - N1*S0)^2 / (N0*N1) in bin-index units.
struct Score {
    int256_t num;
    int256_t den;
};

bool less(const Score& a, const Score& b) { return a.num * b.den < b.num * a.den; }
bool equal(const Score& a, const Score& b) { return a.num * b.den == b.num * a.den; }

}  // namespace

Histogram build_histogram(std::span<const double> values, int bins) {
    if (bins < 2) throw ParameterError("histogram needs at least two bins");
    if (values.empty()) throw DegenerateError("histogram of an empty sample");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (!(*mx > *mn)) throw DegenerateError("all samples are equal; histogram is degenerate");
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    h.lo = *mn;
    h.bin_width = (*mx - *mn) / bins;
    for (double v : values) {
        auto b = static_cast<long>(std::floor((v - h.lo) / h.bin_width));
        b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

int otsu_split(std::span<const std::uint64_t> histogram) {
    const int bins = static_cast<int>(histogram.size());
    if (bins < 2) throw ParameterError("histogram needs at least two bins");

    __int128 n_total = 0, s_total = 0;
    for (int b = 0; b < bins; ++b) {
        n_total += histogram[b];
        s_total += static_cast<__int128>(histogram[b]) * b;
    }

    Score best{0, 1};
    long long index_sum = 0;
    int index_count = 0;
    __int128 n0 = 0, s0 = 0;
    for (int s = 1; s < bins; ++s) {
        n0 += histogram[s - 1];
        s0 += static_cast<__int128>(histogram[s - 1]) * (s - 1);
        const __int128 n1 = n_total - n0;
        if (n0 == 0 || n1 == 0) continue;
        const __int128 s1 = s_total - s0;
        const int256_t d = int256_t(n0) * int256_t(s1) - int256_t(n1) * int256_t(s0);
        const Score score{d * d, int256_t(n0) * int256_t(n1)};
        if (index_count == 0 || less(best, score)) {
            best = score;
            index_sum = s;
            index_count = 1;
        } else if (equal(best, score)) {
            index_sum += s;
            ++index_count;
        }
    }
    if (index_count == 0) throw DegenerateError("histogram has a single occupied bin");
    return static_cast<int>(index_sum / index_count);
}

double otsu_threshold(std::span<const double> values, int bins) {
    const Histogram h = build_histogram(values, bins);
    const int split = otsu_split(h.counts);
    return h.bin_center(split - 1);
}

}  // namespace inkgrain
