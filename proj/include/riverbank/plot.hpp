#pragma once

#include <array>
#include <string>
#include <vector>

#include "riverbank/raster.hpp"

namespace riverbank {

// One polyline on the time-series chart.
struct PlotSeries {
    std::string name;
    std::vector<double> values;  // one value per epoch, in km^2
    std::array<std::uint8_t, 3> color{0, 0, 0};
};

// Renders area-vs-epoch polylines with axes, ticks and a small legend into
// a fixed-size raster. Epochs run left to right at equal spacing.
RgbImage render_series_plot(const std::vector<PlotSeries>& series, int width = 800,
                            int height = 480);

}  // namespace riverbank
