#pragma once

#include "riverbank/components.hpp"
#include "riverbank/raster.hpp"

namespace riverbank {

enum class ChannelMode { BlueDominance, NdwiProxy, SingleChannel };
enum class ThresholdMode { Fixed, Otsu };

// Parameters of the rough color-channel land/water segmenter. Scores are
// normalized to [0, 1] in every channel mode so one threshold convention
// covers all of them; pixels scoring above the threshold are water.
struct SegmenterParams {
    ChannelMode channel_mode = ChannelMode::BlueDominance;
    int channel = 2;  // 0=R 1=G 2=B, used by SingleChannel
    ThresholdMode threshold_mode = ThresholdMode::Otsu;
    double fixed_threshold = 0.5;  // in [0, 1], used by Fixed
    int refine_radius = 1;
    std::int64_t refine_min_area = 500;
    Connectivity connectivity = Connectivity::Eight;

    void validate() const;
};

// Per-channel histogram equalization with the plain CDF remap
// lut(v) = round(255 * cdf(v)). A channel with a single occupied level is
// returned unchanged.
RgbImage histogram_equalize(const RgbImage& image);

// Normalized water score in [0, 1] for one pixel under the given mode.
// Black pixels (0,0,0) score 0 so border padding never reads as water.
double water_score(std::uint8_t r, std::uint8_t g, std::uint8_t b, const SegmenterParams& p);

// Otsu threshold over a score histogram with `bins` equal-width bins on
// [0, 1]. Returns the midpoint of the maximizing plateau. A degenerate
// (single-level) histogram yields 0.5.
double otsu_threshold(const std::vector<double>& scores, int bins = 256);

// score > threshold => water (0), else land (1).
BinaryMask color_channel_segment(const RgbImage& image, const SegmenterParams& params);

// close(refine_radius), open(refine_radius), then filter_min_area, in that
// fixed order. radius 0 / min_area 0 disable the respective step.
BinaryMask refine_mask(const BinaryMask& mask, const SegmenterParams& params);

}  // namespace riverbank
