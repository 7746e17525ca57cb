#include "riverbank/morphology.hpp"

#include <algorithm>

namespace riverbank {

namespace {

// Summed-area table over a mask-sized grid.
struct WindowCounts {
    std::vector<std::int64_t> sums;  // integral image, (w+1)*(h+1)
    int width = 0, height = 0;

    explicit WindowCounts(const BinaryMask& m) : width(m.width), height(m.height) {
        sums.assign(static_cast<std::size_t>(width + 1) * (height + 1), 0);
        for (int y = 0; y < height; ++y) {
            std::int64_t row = 0;
            for (int x = 0; x < width; ++x) {
                row += m.at(x, y);
                sums[static_cast<std::size_t>(y + 1) * (width + 1) + (x + 1)] =
                    sums[static_cast<std::size_t>(y) * (width + 1) + (x + 1)] + row;
            }
        }
    }

    std::int64_t rect(int x0, int y0, int x1, int y1) const {  // inclusive coords
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, width - 1);
        y1 = std::min(y1, height - 1);
        if (x0 > x1 || y0 > y1) return 0;
        const auto at = [&](int x, int y) {
            return sums[static_cast<std::size_t>(y) * (width + 1) + x];
        };
        return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
    }
};

void require_radius(int radius) {
    if (radius < 1) throw Error("morphology radius must be >= 1");
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) {
    require_radius(radius);
    WindowCounts wc(mask);
    const std::int64_t full = static_cast<std::int64_t>(2 * radius + 1) * (2 * radius + 1);
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            out.at(x, y) =
                wc.rect(x - radius, y - radius, x + radius, y + radius) == full ? 1 : 0;
    return out;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    require_radius(radius);
    WindowCounts wc(mask);
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            out.at(x, y) = wc.rect(x - radius, y - radius, x + radius, y + radius) > 0 ? 1 : 0;
    return out;
}

// Opening and closing use plane semantics: the raster is conceptually
// embedded in an infinite background. Opening needs no padding (erosion
// shrinks into the grid), but closing must keep the dilation halo outside
// the grid alive between its two steps, so it runs on a radius-padded copy.

BinaryMask morphological_open(const BinaryMask& mask, int radius) {
    return dilate(erode(mask, radius), radius);
}

BinaryMask morphological_close(const BinaryMask& mask, int radius) {
    require_radius(radius);
    BinaryMask padded(mask.width + 2 * radius, mask.height + 2 * radius, 0);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            padded.at(x + radius, y + radius) = mask.at(x, y);

    const BinaryMask closed = erode(dilate(padded, radius), radius);

    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            out.at(x, y) = closed.at(x + radius, y + radius);
    return out;
}

BinaryMask morphological(const BinaryMask& mask, MorphOp op, int radius) {
    return op == MorphOp::Open ? morphological_open(mask, radius)
                               : morphological_close(mask, radius);
}

}  // namespace riverbank
