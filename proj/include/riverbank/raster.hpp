#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riverbank/date.hpp"
#include "riverbank/error.hpp"

namespace riverbank {

// Per-pixel land/water grid, the common currency of the toolkit.
// Convention fixed project-wide: land = 1, water = 0, row-major storage,
// origin at the top-left, x = column, y = row.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // exactly 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const { return data.size(); }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    bool same_dims(const BinaryMask& o) const { return width == o.width && height == o.height; }
    bool operator==(const BinaryMask&) const = default;

    std::int64_t foreground_count() const;

    // Enforces the type invariants (size w*h, values in {0,1}); throws Error.
    void validate() const;
};

// Interleaved 8-bit RGB raster.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // r,g,b per pixel, row-major

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    const std::uint8_t* px(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    std::uint8_t* px(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    bool operator==(const RgbImage&) const = default;
};

// Per-pixel probability of the positive class, stored in double precision so
// the loss reference math and its gradient checks are not limited by float32.
struct ProbMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // each value in [0, 1]

    ProbMap() = default;
    ProbMap(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const { return data.size(); }
    bool same_dims(const ProbMap& o) const { return width == o.width && height == o.height; }
};

// Georeferencing carried as a sidecar next to each raster. The toolkit never
// reprojects; it only checks agreement and converts pixel counts to areas.
struct GeoMeta {
    double resolution_m = 10.0;  // meters per pixel, > 0
    double latitude = 0.0;       // [-90, 90]
    double longitude = 0.0;      // [-180, 180]
    double elevation_m = 0.0;
    CivilDate capture_date;

    void validate() const;
};

// One dated satellite capture: image, optional annotation mask, geo sidecar.
struct Scene {
    RgbImage image;
    std::optional<BinaryMask> mask;
    GeoMeta geo;

    void validate() const;
};

enum class MaskOp { And, Or, Not, AndNot };

// Pixelwise boolean algebra on masks. `b` is ignored for Not.
// Throws DimensionMismatch when a binary op sees unequal shapes.
BinaryMask mask_logic(const BinaryMask& a, const BinaryMask& b, MaskOp op);
BinaryMask mask_not(const BinaryMask& a);

// Fraction of pixels equal to 1.
double land_fraction(const BinaryMask& m);

// Great-circle distance between two lat/lon points in meters (haversine,
// mean earth radius 6371.0088 km).
double great_circle_m(double lat1, double lon1, double lat2, double lon2);

}  // namespace riverbank
