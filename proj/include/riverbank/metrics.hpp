#pragma once

#include <cstdint>
#include <vector>

#include "riverbank/change.hpp"
#include "riverbank/raster.hpp"

namespace riverbank {

enum class PositiveClass { Land, Water };

// Standard pixelwise confusion counts for a pred/gt mask pair.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
};

struct MetricsReport {
    double iou = 0.0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double pixel_accuracy = 0.0;
    double boundary_iou = 0.0;  // filled by boundary_iou(), not by metrics()
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt, PositiveClass positive);

// iou = tp/(tp+fp+fn), precision = tp/(tp+fp), recall = tp/(tp+fn),
// f1 = 2tp/(2tp+fp+fn), pixel_accuracy = (tp+tn)/total.
// Zero-denominator convention: a metric whose denominator is 0 returns 1
// when the masks agreed everywhere (fp = fn = 0) and 0 otherwise.
MetricsReport metrics(const ConfusionCounts& c);

// Foreground pixels within band_px (Chebyshev distance) of any in-grid
// background pixel.
BinaryMask boundary_band(const BinaryMask& mask, int band_px);

// IoU of the two boundary bands; 1.0 when both bands are empty.
double boundary_iou(const BinaryMask& pred, const BinaryMask& gt, int band_px);

// Chance-corrected agreement between two annotations of the same scene.
double cohens_kappa(const BinaryMask& a, const BinaryMask& b);

// Fraction of pixels equal to `value` across all masks in the list.
double class_fraction(const std::vector<BinaryMask>& masks, std::uint8_t value);
// Fraction of pixels carrying `label` across all change maps in the list.
double class_fraction(const std::vector<ChangeMap>& maps, ChangeLabel label);

}  // namespace riverbank
