#pragma once

#include <random>

#include "riverbank/raster.hpp"

namespace riverbank::test {

// Seeded random mask; density is the foreground probability.
inline BinaryMask random_mask(std::mt19937& rng, int w, int h, double density = 0.5) {
    BinaryMask m(w, h);
    std::bernoulli_distribution bit(density);
    for (auto& v : m.data) v = bit(rng) ? 1 : 0;
    return m;
}

inline ProbMap random_prob_map(std::mt19937& rng, int w, int h, double lo = 0.05,
                               double hi = 0.95) {
    ProbMap p(w, h);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (auto& v : p.data) v = dist(rng);
    return p;
}

inline RgbImage random_image(std::mt19937& rng, int w, int h) {
    RgbImage img(w, h);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(byte(rng));
    return img;
}

// Draws a filled axis-aligned rectangle of foreground.
inline void fill_rect(BinaryMask& m, int x0, int y0, int x1, int y1) {
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) m.at(x, y) = 1;
}

}  // namespace riverbank::test
