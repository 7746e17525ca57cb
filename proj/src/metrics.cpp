#include "riverbank/metrics.hpp"

#include <algorithm>
#include <string>

namespace riverbank {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt,
                          PositiveClass positive) {
    if (!pred.same_dims(gt))
        throw DimensionMismatch("confusion: " + std::to_string(pred.width) + "x" +
                                std::to_string(pred.height) + " vs " +
                                std::to_string(gt.width) + "x" + std::to_string(gt.height));
    const std::uint8_t pos = positive == PositiveClass::Land ? 1 : 0;
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred.data[i] == pos;
        const bool g = gt.data[i] == pos;
        if (p && g)
            ++c.tp;
        else if (p && !g)
            ++c.fp;
        else if (!p && g)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

namespace {

double safe_ratio(std::int64_t num, std::int64_t den, bool perfect) {
    if (den == 0) return perfect ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw EmptyInput("metrics on zero-pixel confusion counts");
    const bool perfect = c.fp == 0 && c.fn == 0;
    MetricsReport r;
    r.iou = safe_ratio(c.tp, c.tp + c.fp + c.fn, perfect);
    r.precision = safe_ratio(c.tp, c.tp + c.fp, perfect);
    r.recall = safe_ratio(c.tp, c.tp + c.fn, perfect);
    r.f1 = safe_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, perfect);
    r.pixel_accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return r;
}

BinaryMask boundary_band(const BinaryMask& mask, int band_px) {
    if (band_px < 1) throw Error("boundary band width must be >= 1");

    // Chebyshev distance to the nearest background pixel, two-pass chamfer.
    const int w = mask.width, h = mask.height;
    const int inf = w + h + 2;
    std::vector<int> dist(mask.size(), inf);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask.data[i] == 0) dist[i] = 0;

    const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int d = dist[idx(x, y)];
            if (x > 0) d = std::min(d, dist[idx(x - 1, y)] + 1);
            if (y > 0) {
                d = std::min(d, dist[idx(x, y - 1)] + 1);
                if (x > 0) d = std::min(d, dist[idx(x - 1, y - 1)] + 1);
                if (x < w - 1) d = std::min(d, dist[idx(x + 1, y - 1)] + 1);
            }
            dist[idx(x, y)] = d;
        }
    for (int y = h - 1; y >= 0; --y)
        for (int x = w - 1; x >= 0; --x) {
            int d = dist[idx(x, y)];
            if (x < w - 1) d = std::min(d, dist[idx(x + 1, y)] + 1);
            if (y < h - 1) {
                d = std::min(d, dist[idx(x, y + 1)] + 1);
                if (x < w - 1) d = std::min(d, dist[idx(x + 1, y + 1)] + 1);
                if (x > 0) d = std::min(d, dist[idx(x - 1, y + 1)] + 1);
            }
            dist[idx(x, y)] = d;
        }

    BinaryMask band(w, h);
    for (std::size_t i = 0; i < mask.size(); ++i)
        band.data[i] = (mask.data[i] == 1 && dist[i] <= band_px) ? 1 : 0;
    return band;
}

double boundary_iou(const BinaryMask& pred, const BinaryMask& gt, int band_px) {
    if (!pred.same_dims(gt))
        throw DimensionMismatch("boundary_iou: shape mismatch");
    const BinaryMask bp = boundary_band(pred, band_px);
    const BinaryMask bg = boundary_band(gt, band_px);
    std::int64_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        inter += bp.data[i] & bg.data[i];
        uni += bp.data[i] | bg.data[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double cohens_kappa(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_dims(b)) throw DimensionMismatch("cohens_kappa: shape mismatch");
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    if (n == 0) throw EmptyInput("cohens_kappa on empty masks");

    std::int64_t agree = 0, a1 = 0, b1 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        agree += a.data[i] == b.data[i];
        a1 += a.data[i];
        b1 += b.data[i];
    }
    const double po = static_cast<double>(agree) / static_cast<double>(n);
    const double pa1 = static_cast<double>(a1) / static_cast<double>(n);
    const double pb1 = static_cast<double>(b1) / static_cast<double>(n);
    const double pe = pa1 * pb1 + (1.0 - pa1) * (1.0 - pb1);
    if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;  // both raters constant
    return (po - pe) / (1.0 - pe);
}

double class_fraction(const std::vector<BinaryMask>& masks, std::uint8_t value) {
    if (masks.empty()) throw EmptyInput("class_fraction on empty mask list");
    std::int64_t hits = 0, total = 0;
    for (const BinaryMask& m : masks) {
        total += static_cast<std::int64_t>(m.size());
        for (std::uint8_t v : m.data) hits += v == value;
    }
    if (total == 0) throw EmptyInput("class_fraction over zero pixels");
    return static_cast<double>(hits) / static_cast<double>(total);
}

double class_fraction(const std::vector<ChangeMap>& maps, ChangeLabel label) {
    if (maps.empty()) throw EmptyInput("class_fraction on empty map list");
    std::int64_t hits = 0, total = 0;
    for (const ChangeMap& m : maps) {
        total += static_cast<std::int64_t>(m.size());
        hits += m.count(label);
    }
    if (total == 0) throw EmptyInput("class_fraction over zero pixels");
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace riverbank
