#pragma once

// Exhaustive reference implementations used by the unit and acceptance tests.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "inkgrain/labels.hpp"
#include "inkgrain/segmentation.hpp"

namespace inkgrain::test {

using boost::multiprecision::cpp_rational;

inline int bin_of(double v, double lo, double width, int bins) {
    return std::clamp(static_cast<int>(std::floor((v - lo) / width)), 0, bins - 1);
}

// Exhaustive Otsu: every split evaluated from the raw samples with exact
// rational class weights and means.
inline double brute_otsu(const std::vector<double>& values, int bins) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn, width = (*mx - *mn) / bins;
    std::vector<int> idx(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) idx[i] = bin_of(values[i], lo, width, bins);

    cpp_rational best = -1;
    std::vector<int> argmax;
    const cpp_rational n = static_cast<long>(values.size());
    for (int s = 1; s < bins; ++s) {
        long n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (int b : idx) {
            if (b < s) {
                ++n0;
                s0 += b;
            } else {
                ++n1;
                s1 += b;
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        const cpp_rational w0 = cpp_rational(n0) / n, w1 = cpp_rational(n1) / n;
        const cpp_rational mu0 = cpp_rational(s0) / n0, mu1 = cpp_rational(s1) / n1;
        const cpp_rational var = w0 * w1 * (mu1 - mu0) * (mu1 - mu0);
        if (var > best) {
            best = var;
            argmax = {s};
        } else if (var == best) {
            argmax.push_back(s);
        }
    }
    const long sum = std::accumulate(argmax.begin(), argmax.end(), 0L);
    const int split = static_cast<int>(sum / static_cast<long>(argmax.size()));
    return lo + (split - 1 + 0.5) * width;
}

inline std::vector<int> brute_knn(const std::vector<Feature>& queries, const std::vector<Exemplar>& ex, int k) {
    std::vector<int> out;
    for (const Feature& q : queries) {
        std::vector<std::pair<double, int>> d;
        for (std::size_t i = 0; i < ex.size(); ++i) {
            const double dx = q[0] - ex[i].feature[0];
            const double dy = q[1] - ex[i].feature[1];
            const double dz = q[2] - ex[i].feature[2];
            d.emplace_back((dx * dx + dy * dy) + dz * dz, static_cast<int>(i));
        }
        std::sort(d.begin(), d.end());
        std::map<int, int> votes;
        for (int j = 0; j < k; ++j) ++votes[ex[d[j].second].label];
        int top = 0;
        for (auto& [_, c] : votes) top = std::max(top, c);
        for (int j = 0; j < k; ++j) {
            const int label = ex[d[j].second].label;
            if (votes[label] == top) {
                out.push_back(label);
                break;
            }
        }
    }
    return out;
}

inline double brute_iou(const BinaryMask& a, const BinaryMask& b) {
    std::size_t inter = 0, uni = 0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x) {
            inter += a.get(x, y) && b.get(x, y);
            uni += a.get(x, y) || b.get(x, y);
        }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace inkgrain::test
