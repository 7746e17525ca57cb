#include "riverbank/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace riverbank {

namespace {

void put_px(RgbImage& img, int x, int y, const std::array<std::uint8_t, 3>& c) {
    if (x < 0 || x >= img.width || y < 0 || y >= img.height) return;
    std::uint8_t* p = img.px(x, y);
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
}

void draw_line(RgbImage& img, int x0, int y0, int x1, int y1,
               const std::array<std::uint8_t, 3>& c) {
    // Bresenham.
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        put_px(img, x0, y0, c);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

// 5x7 digit/minus/dot glyphs, enough for axis tick labels.
const char* glyph(char c) {
    switch (c) {
        case '0': return "111101101101101101111";
        case '1': return "010110010010010010111";
        case '2': return "111001001111100100111";
        case '3': return "111001001111001001111";
        case '4': return "101101101111001001001";
        case '5': return "111100100111001001111";
        case '6': return "111100100111101101111";
        case '7': return "111001001010010010010";
        case '8': return "111101101111101101111";
        case '9': return "111101101111001001111";
        case '-': return "000000000111000000000";
        case '.': return "000000000000000000010";
        default: return nullptr;
    }
}

void draw_text(RgbImage& img, int x, int y, const std::string& text,
               const std::array<std::uint8_t, 3>& c) {
    int cx = x;
    for (char ch : text) {
        const char* g = glyph(ch);
        if (g) {
            for (int row = 0; row < 7; ++row)
                for (int col = 0; col < 3; ++col)
                    if (g[row * 3 + col] == '1') put_px(img, cx + col, y + row, c);
        }
        cx += 4;
    }
}

}  // namespace

RgbImage render_series_plot(const std::vector<PlotSeries>& series, int width, int height) {
    RgbImage img(width, height);
    std::fill(img.data.begin(), img.data.end(), std::uint8_t{255});

    const std::array<std::uint8_t, 3> axis_color{30, 30, 30};
    const std::array<std::uint8_t, 3> grid_color{225, 225, 225};
    const int margin_l = 56, margin_r = 16, margin_t = 16, margin_b = 36;
    const int x0 = margin_l, x1 = width - margin_r;
    const int y0 = height - margin_b, y1 = margin_t;  // y grows downward

    std::size_t epochs = 0;
    double vmin = 0.0, vmax = 0.0;
    bool any = false;
    for (const PlotSeries& s : series) {
        epochs = std::max(epochs, s.values.size());
        for (double v : s.values) {
            if (!any) {
                vmin = vmax = v;
                any = true;
            }
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    if (!any || epochs == 0) {
        draw_line(img, x0, y0, x1, y0, axis_color);
        draw_line(img, x0, y0, x0, y1, axis_color);
        return img;
    }
    vmin = std::min(vmin, 0.0);
    if (vmax <= vmin) vmax = vmin + 1.0;

    const auto map_x = [&](std::size_t i) {
        if (epochs == 1) return (x0 + x1) / 2;
        return x0 + static_cast<int>(std::lround(static_cast<double>(i) * (x1 - x0) /
                                                 static_cast<double>(epochs - 1)));
    };
    const auto map_y = [&](double v) {
        return y0 - static_cast<int>(std::lround((v - vmin) / (vmax - vmin) * (y0 - y1)));
    };

    // Horizontal grid with value labels at 5 ticks.
    for (int t = 0; t <= 4; ++t) {
        const double v = vmin + (vmax - vmin) * t / 4.0;
        const int y = map_y(v);
        draw_line(img, x0, y, x1, y, grid_color);
        char label[32];
        std::snprintf(label, sizeof(label), "%.2f", v);
        draw_text(img, 4, y - 3, label, axis_color);
    }
    // Epoch ticks.
    for (std::size_t i = 0; i < epochs; ++i) {
        const int x = map_x(i);
        draw_line(img, x, y0, x, y0 + 4, axis_color);
        draw_text(img, x - 2, y0 + 8, std::to_string(i + 1), axis_color);
    }

    draw_line(img, x0, y0, x1, y0, axis_color);
    draw_line(img, x0, y0, x0, y1, axis_color);

    int legend_y = y1 + 4;
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
            draw_line(img, map_x(i), map_y(s.values[i]), map_x(i + 1), map_y(s.values[i + 1]),
                      s.color);
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const int cx = map_x(i), cy = map_y(s.values[i]);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) put_px(img, cx + dx, cy + dy, s.color);
        }
        // Legend swatch; series names are listed in the CSV, not drawn.
        draw_line(img, x1 - 40, legend_y, x1 - 20, legend_y, s.color);
        draw_line(img, x1 - 40, legend_y + 1, x1 - 20, legend_y + 1, s.color);
        legend_y += 8;
    }
    return img;
}

}  // namespace riverbank
