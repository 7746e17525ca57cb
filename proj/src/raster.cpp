#include "riverbank/raster.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace riverbank {

std::int64_t BinaryMask::foreground_count() const {
    return std::accumulate(data.begin(), data.end(), std::int64_t{0});
}

void BinaryMask::validate() const {
    if (width <= 0 || height <= 0)
        throw Error("mask dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
    if (data.size() != static_cast<std::size_t>(width) * height)
        throw Error("mask data length does not match width*height");
    for (std::uint8_t v : data)
        if (v > 1) throw Error("mask contains a value other than 0 or 1");
}

void GeoMeta::validate() const {
    if (!(resolution_m > 0.0))
        throw NonPositiveResolution("resolution_m must be > 0, got " +
                                    std::to_string(resolution_m));
    if (latitude < -90.0 || latitude > 90.0)
        throw Error("latitude out of [-90, 90]: " + std::to_string(latitude));
    if (longitude < -180.0 || longitude > 180.0)
        throw Error("longitude out of [-180, 180]: " + std::to_string(longitude));
}

void Scene::validate() const {
    geo.validate();
    if (mask) {
        mask->validate();
        if (mask->width != image.width || mask->height != image.height)
            throw DimensionMismatch("scene mask dimensions differ from image dimensions");
    }
}

BinaryMask mask_logic(const BinaryMask& a, const BinaryMask& b, MaskOp op) {
    if (op == MaskOp::Not) return mask_not(a);
    if (!a.same_dims(b))
        throw DimensionMismatch("mask_logic: " + std::to_string(a.width) + "x" +
                                std::to_string(a.height) + " vs " + std::to_string(b.width) +
                                "x" + std::to_string(b.height));
    BinaryMask out(a.width, a.height);
    const std::size_t n = a.size();
    switch (op) {
        case MaskOp::And:
            for (std::size_t i = 0; i < n; ++i) out.data[i] = a.data[i] & b.data[i];
            break;
        case MaskOp::Or:
            for (std::size_t i = 0; i < n; ++i) out.data[i] = a.data[i] | b.data[i];
            break;
        case MaskOp::AndNot:
            for (std::size_t i = 0; i < n; ++i) out.data[i] = a.data[i] & (1 - b.data[i]);
            break;
        case MaskOp::Not:
            break;  // handled above
    }
    return out;
}

BinaryMask mask_not(const BinaryMask& a) {
    BinaryMask out(a.width, a.height);
    for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = 1 - a.data[i];
    return out;
}

double land_fraction(const BinaryMask& m) {
    if (m.size() == 0) throw EmptyInput("land_fraction on empty mask");
    return static_cast<double>(m.foreground_count()) / static_cast<double>(m.size());
}

double great_circle_m(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kEarthRadiusM = 6371008.8;
    constexpr double kDeg2Rad = 3.14159265358979323846 / 180.0;
    const double phi1 = lat1 * kDeg2Rad;
    const double phi2 = lat2 * kDeg2Rad;
    const double dphi = (lat2 - lat1) * kDeg2Rad;
    const double dlmb = (lon2 - lon1) * kDeg2Rad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlmb / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

}  // namespace riverbank
