#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "riverbank/components.hpp"
#include "riverbank/raster.hpp"

namespace riverbank {

// Per-pixel temporal classification of a co-registered mask pair.
enum class ChangeLabel : std::uint8_t {
    StableWater = 0,  // water -> water
    Accretion = 1,    // water -> land
    Erosion = 2,      // land -> water
    StableLand = 3,   // land -> land
};

struct ChangeMap {
    int width = 0;
    int height = 0;
    std::vector<ChangeLabel> data;  // row-major

    ChangeMap() = default;
    ChangeMap(int w, int h, ChangeLabel fill = ChangeLabel::StableWater)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const { return data.size(); }
    ChangeLabel at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    ChangeLabel& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const ChangeMap&) const = default;

    std::int64_t count(ChangeLabel l) const;
    // Binary mask of pixels carrying the given label.
    BinaryMask class_mask(ChangeLabel l) const;
};

struct CoregistrationReport {
    bool dims_match = false;
    bool resolution_match = false;
    double geo_offset_m = 0.0;

    bool ok() const { return dims_match && resolution_match; }
};

// Compares grid shape, resolution (relative tolerance) and scene-origin
// distance. Pure report; alignment failures surface as fields, not throws.
CoregistrationReport check_coregistration(const BinaryMask& a, const GeoMeta& ga,
                                          const BinaryMask& b, const GeoMeta& gb,
                                          double rel_tolerance);
// Scene convenience: dimensions come from the image raster.
CoregistrationReport check_coregistration(const Scene& a, const Scene& b,
                                          double rel_tolerance);

// Pixelwise 4-way classification of a t1/t2 land-mask pair:
// land->water = Erosion, water->land = Accretion, otherwise stable.
ChangeMap classify_change(const BinaryMask& mask_t1, const BinaryMask& mask_t2);

// Relabels Erosion components smaller than min_px to StableLand and
// Accretion components smaller than min_px to StableWater; components of
// exactly min_px survive. Stable labels are never touched.
ChangeMap filter_change(const ChangeMap& cm, std::int64_t min_px, Connectivity conn);

// Fixed rendering palette (RGB).
inline constexpr std::array<std::uint8_t, 3> kErosionColor{220, 50, 47};
inline constexpr std::array<std::uint8_t, 3> kAccretionColor{64, 160, 43};
inline constexpr std::array<std::uint8_t, 3> kStableLandColor{200, 200, 200};
inline constexpr std::array<std::uint8_t, 3> kStableWaterColor{38, 80, 140};

RgbImage render_change_map(const ChangeMap& cm);

// Inverse of render_change_map. Throws SchemaMismatch on any pixel outside
// the fixed palette.
ChangeMap parse_change_map(const RgbImage& img);

}  // namespace riverbank
