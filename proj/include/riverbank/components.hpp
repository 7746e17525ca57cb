#pragma once

#include <cstdint>
#include <vector>

#include "riverbank/raster.hpp"

namespace riverbank {

enum class Connectivity { Four = 4, Eight = 8 };

// One maximal foreground region. Labels start at 1; 0 marks background in
// the label grid.
struct Component {
    int label = 0;
    std::int64_t pixel_count = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

struct ComponentLabeling {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;  // 0 = background
    std::vector<Component> components;

    std::int32_t label_at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
};

// Labels maximal foreground components under the chosen connectivity.
// Labels are assigned in raster-scan order of each component's first pixel,
// so the result is deterministic. Empty mask yields an empty component list.
ComponentLabeling connected_components(const BinaryMask& mask, Connectivity conn);

// Removes every foreground component smaller than min_px pixels; components
// of exactly min_px survive. min_px = 0 is the identity.
BinaryMask filter_min_area(const BinaryMask& mask, std::int64_t min_px, Connectivity conn);

}  // namespace riverbank
