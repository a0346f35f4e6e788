#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "inkgrain/labels.hpp"
#include "inkgrain/raster.hpp"

namespace inkgrain::test {

inline BinaryMask random_mask(int w, int h, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution bit(p);
    BinaryMask m(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, bit(rng));
    return m;
}

inline LabelMap random_labels(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> cls(0, 3);
    LabelMap m(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, static_cast<Label>(cls(rng)));
    return m;
}

inline RasterImage gray_image(int w, int h, double v, double dpi = 8000.0) {
    return RasterImage(w, h, dpi, v);
}

}  // namespace inkgrain::test
