#pragma once

#include "riverbank/raster.hpp"

namespace riverbank {

// Binary morphology with a square structuring element of side 2*radius+1.
//
// Border convention: the raster is treated as embedded in an infinite
// background (out-of-grid pixels read as 0). Closing internally pads by the
// radius so its dilation halo survives into the erosion step; with that,
// open/close are idempotent, closing never removes foreground and opening
// never adds any, including at the image border.

BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);

// erode then dilate
BinaryMask morphological_open(const BinaryMask& mask, int radius);
// dilate then erode
BinaryMask morphological_close(const BinaryMask& mask, int radius);

enum class MorphOp { Open, Close };

BinaryMask morphological(const BinaryMask& mask, MorphOp op, int radius);

}  // namespace riverbank
