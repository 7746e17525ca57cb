#include "riverbank/change.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace riverbank {

std::int64_t ChangeMap::count(ChangeLabel l) const {
    return std::count(data.begin(), data.end(), l);
}

BinaryMask ChangeMap::class_mask(ChangeLabel l) const {
    BinaryMask m(width, height);
    for (std::size_t i = 0; i < data.size(); ++i) m.data[i] = data[i] == l ? 1 : 0;
    return m;
}

namespace {

CoregistrationReport coreg_report(int wa, int ha, const GeoMeta& ga, int wb, int hb,
                                  const GeoMeta& gb, double rel_tolerance) {
    CoregistrationReport rep;
    rep.dims_match = wa == wb && ha == hb;
    const double denom = std::max(std::abs(ga.resolution_m), std::abs(gb.resolution_m));
    const double rel = denom > 0.0 ? std::abs(ga.resolution_m - gb.resolution_m) / denom : 0.0;
    rep.resolution_match = rel <= rel_tolerance;
    rep.geo_offset_m = great_circle_m(ga.latitude, ga.longitude, gb.latitude, gb.longitude);
    return rep;
}

}  // namespace

CoregistrationReport check_coregistration(const BinaryMask& a, const GeoMeta& ga,
                                          const BinaryMask& b, const GeoMeta& gb,
                                          double rel_tolerance) {
    return coreg_report(a.width, a.height, ga, b.width, b.height, gb, rel_tolerance);
}

CoregistrationReport check_coregistration(const Scene& a, const Scene& b,
                                          double rel_tolerance) {
    return coreg_report(a.image.width, a.image.height, a.geo, b.image.width, b.image.height,
                        b.geo, rel_tolerance);
}

ChangeMap classify_change(const BinaryMask& mask_t1, const BinaryMask& mask_t2) {
    if (!mask_t1.same_dims(mask_t2))
        throw DimensionMismatch("classify_change: " + std::to_string(mask_t1.width) + "x" +
                                std::to_string(mask_t1.height) + " vs " +
                                std::to_string(mask_t2.width) + "x" +
                                std::to_string(mask_t2.height));
    ChangeMap cm(mask_t1.width, mask_t1.height);
    for (std::size_t i = 0; i < cm.size(); ++i) {
        const std::uint8_t l1 = mask_t1.data[i];
        const std::uint8_t l2 = mask_t2.data[i];
        // Erosion = land(t1) AND NOT land(t2); Accretion = NOT land(t1) AND land(t2).
        cm.data[i] = static_cast<ChangeLabel>((l1 << 1) | l2);
    }
    return cm;
}

ChangeMap filter_change(const ChangeMap& cm, std::int64_t min_px, Connectivity conn) {
    if (min_px <= 0) return cm;
    ChangeMap out = cm;

    const auto relabel_small = [&](ChangeLabel from, ChangeLabel to) {
        const BinaryMask m = cm.class_mask(from);
        const ComponentLabeling lab = connected_components(m, conn);
        std::vector<std::uint8_t> drop(lab.components.size() + 1, 0);
        for (const Component& c : lab.components)
            drop[static_cast<std::size_t>(c.label)] = c.pixel_count < min_px ? 1 : 0;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (lab.labels[i] != 0 && drop[static_cast<std::size_t>(lab.labels[i])])
                out.data[i] = to;
    };

    // A rejected change claim reverts the pixel to its t1 state.
    relabel_small(ChangeLabel::Erosion, ChangeLabel::StableLand);
    relabel_small(ChangeLabel::Accretion, ChangeLabel::StableWater);
    return out;
}

namespace {

const std::array<std::uint8_t, 3>& palette_color(ChangeLabel l) {
    switch (l) {
        case ChangeLabel::Erosion: return kErosionColor;
        case ChangeLabel::Accretion: return kAccretionColor;
        case ChangeLabel::StableLand: return kStableLandColor;
        case ChangeLabel::StableWater: return kStableWaterColor;
    }
    return kStableWaterColor;
}

}  // namespace

RgbImage render_change_map(const ChangeMap& cm) {
    RgbImage img(cm.width, cm.height);
    for (std::size_t i = 0; i < cm.size(); ++i) {
        const auto& c = palette_color(cm.data[i]);
        img.data[i * 3] = c[0];
        img.data[i * 3 + 1] = c[1];
        img.data[i * 3 + 2] = c[2];
    }
    return img;
}

ChangeMap parse_change_map(const RgbImage& img) {
    ChangeMap cm(img.width, img.height);
    static const std::array<ChangeLabel, 4> kLabels = {
        ChangeLabel::Erosion, ChangeLabel::Accretion, ChangeLabel::StableLand,
        ChangeLabel::StableWater};
    for (std::size_t i = 0; i < cm.size(); ++i) {
        const std::uint8_t r = img.data[i * 3];
        const std::uint8_t g = img.data[i * 3 + 1];
        const std::uint8_t b = img.data[i * 3 + 2];
        bool matched = false;
        for (ChangeLabel l : kLabels) {
            const auto& c = palette_color(l);
            if (r == c[0] && g == c[1] && b == c[2]) {
                cm.data[i] = l;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw SchemaMismatch("pixel color (" + std::to_string(r) + "," + std::to_string(g) +
                                 "," + std::to_string(b) +
                                 ") is not in the change-map palette");
    }
    return cm;
}

}  // namespace riverbank
