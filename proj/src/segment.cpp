#include "riverbank/segment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "riverbank/morphology.hpp"

namespace riverbank {

namespace {
constexpr double kRatioEps = 1e-6;  // guards zero denominators in channel ratios
}

void SegmenterParams::validate() const {
    if (channel_mode == ChannelMode::SingleChannel && (channel < 0 || channel > 2))
        throw Error("single_channel index must be 0, 1 or 2");
    if (threshold_mode == ThresholdMode::Fixed &&
        (fixed_threshold < 0.0 || fixed_threshold > 1.0))
        throw Error("fixed threshold must lie in [0, 1]");
    if (refine_radius < 0) throw Error("refine_radius must be >= 0");
    if (refine_min_area < 0) throw Error("refine_min_area must be >= 0");
}

RgbImage histogram_equalize(const RgbImage& image) {
    RgbImage out(image.width, image.height);
    const std::size_t n = image.pixel_count();
    if (n == 0) return out;

    for (int c = 0; c < 3; ++c) {
        std::array<std::int64_t, 256> hist{};
        for (std::size_t i = 0; i < n; ++i) ++hist[image.data[i * 3 + c]];

        int occupied = 0;
        for (int v = 0; v < 256; ++v) occupied += hist[v] > 0;

        std::array<std::uint8_t, 256> lut{};
        if (occupied <= 1) {
            for (int v = 0; v < 256; ++v) lut[v] = static_cast<std::uint8_t>(v);
        } else {
            std::int64_t cum = 0;
            for (int v = 0; v < 256; ++v) {
                cum += hist[v];
                const double cdf = static_cast<double>(cum) / static_cast<double>(n);
                lut[v] = static_cast<std::uint8_t>(std::lround(255.0 * cdf));
            }
        }
        for (std::size_t i = 0; i < n; ++i) out.data[i * 3 + c] = lut[image.data[i * 3 + c]];
    }
    return out;
}

double water_score(std::uint8_t r, std::uint8_t g, std::uint8_t b, const SegmenterParams& p) {
    if (r == 0 && g == 0 && b == 0) return 0.0;  // black padding is land
    const double rd = r, gd = g, bd = b;
    switch (p.channel_mode) {
        case ChannelMode::BlueDominance:
            return bd / (rd + gd + bd + kRatioEps);
        case ChannelMode::NdwiProxy: {
            const double s = (gd - rd) / (gd + rd + kRatioEps);  // in [-1, 1]
            return (s + 1.0) / 2.0;
        }
        case ChannelMode::SingleChannel: {
            const double v = p.channel == 0 ? rd : p.channel == 1 ? gd : bd;
            return v / 255.0;
        }
    }
    return 0.0;
}

double otsu_threshold(const std::vector<double>& scores, int bins) {
    if (scores.empty()) throw EmptyInput("otsu_threshold on empty score list");
    if (bins < 2) throw Error("otsu needs at least 2 bins");

    std::vector<std::int64_t> hist(static_cast<std::size_t>(bins), 0);
    for (double s : scores) {
        int bin = static_cast<int>(s * bins);
        bin = std::clamp(bin, 0, bins - 1);
        ++hist[static_cast<std::size_t>(bin)];
    }

    const double total = static_cast<double>(scores.size());
    double sum_all = 0.0;
    for (int i = 0; i < bins; ++i) sum_all += i * static_cast<double>(hist[i]);

    // Maximize between-class variance over the cut "bin <= t vs bin > t";
    // take the midpoint of the maximizing plateau.
    double best = -1.0;
    int best_lo = 0, best_hi = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < bins - 1; ++t) {
        w0 += static_cast<double>(hist[t]);
        sum0 += t * static_cast<double>(hist[t]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double var_between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var_between > best + 1e-12) {
            best = var_between;
            best_lo = best_hi = t;
        } else if (std::abs(var_between - best) <= 1e-12) {
            best_hi = t;
        }
    }
    if (best < 0.0) return 0.5;  // single occupied bin, nothing to separate

    const int cut = (best_lo + best_hi) / 2;
    // Place the threshold midway between the actual score values straddling
    // the cut, so values sitting exactly on a bin edge still split cleanly.
    double lo_max = 0.0, hi_min = 1.0;
    bool lo_seen = false, hi_seen = false;
    for (double s : scores) {
        int bin = static_cast<int>(s * bins);
        bin = std::clamp(bin, 0, bins - 1);
        if (bin <= cut) {
            lo_max = lo_seen ? std::max(lo_max, s) : s;
            lo_seen = true;
        } else {
            hi_min = hi_seen ? std::min(hi_min, s) : s;
            hi_seen = true;
        }
    }
    if (!lo_seen || !hi_seen) return (cut + 1.0) / static_cast<double>(bins);
    return (lo_max + hi_min) / 2.0;
}

BinaryMask color_channel_segment(const RgbImage& image, const SegmenterParams& params) {
    params.validate();
    if (image.pixel_count() == 0) throw EmptyInput("color_channel_segment on empty image");

    const std::size_t n = image.pixel_count();
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i)
        scores[i] =
            water_score(image.data[i * 3], image.data[i * 3 + 1], image.data[i * 3 + 2], params);

    const double thr = params.threshold_mode == ThresholdMode::Fixed
                           ? params.fixed_threshold
                           : otsu_threshold(scores);

    BinaryMask mask(image.width, image.height);
    for (std::size_t i = 0; i < n; ++i) mask.data[i] = scores[i] > thr ? 0 : 1;
    return mask;
}

BinaryMask refine_mask(const BinaryMask& mask, const SegmenterParams& params) {
    params.validate();
    BinaryMask out = mask;
    if (params.refine_radius > 0) {
        out = morphological_close(out, params.refine_radius);
        out = morphological_open(out, params.refine_radius);
    }
    if (params.refine_min_area > 0)
        out = filter_min_area(out, params.refine_min_area, params.connectivity);
    return out;
}

}  // namespace riverbank
