#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riverbank/change.hpp"
#include "riverbank/date.hpp"
#include "riverbank/raster.hpp"

namespace riverbank {

enum class AreaUnit { M2, Ha, Km2 };

// Physical change quantities for one classified map. Pixel counts are exact;
// areas are pixel count x resolution^2 in the requested unit. Stable is
// reported split by land/water and as their sum so either reading of
// "stable" is recoverable.
struct ChangeAreas {
    std::int64_t erosion_px = 0;
    std::int64_t accretion_px = 0;
    std::int64_t stable_land_px = 0;
    std::int64_t stable_water_px = 0;
    std::int64_t stable_px = 0;  // stable_land_px + stable_water_px

    double erosion_km2 = 0.0;
    double accretion_km2 = 0.0;
    double stable_land_km2 = 0.0;
    double stable_water_km2 = 0.0;
    double stable_km2 = 0.0;
    double net_change_km2 = 0.0;  // accretion - erosion; gain is positive

    double resolution_m = 0.0;
    double uncertainty_fraction = 0.0;
    bool uncertainty_extrapolated = false;  // true when resolution > 1 m/px
};

// Rates over a dated interval, in km^2 per 365.25-day year.
struct ChangeRates {
    double years = 0.0;
    double erosion_km2_per_yr = 0.0;
    double accretion_km2_per_yr = 0.0;
    double net_km2_per_yr = 0.0;
};

// Ground footprint of one pixel. Throws NonPositiveResolution.
double pixel_area_m2(double resolution_m);

// n pixels at the given resolution, converted to the unit
// (1 ha = 1e4 m^2, 1 km^2 = 1e6 m^2).
double area_from_pixels(std::int64_t n, double resolution_m, AreaUnit unit);

// Counts the change map per class and converts to physical areas.
ChangeAreas quantify(const ChangeMap& cm, const GeoMeta& geo);

// Per-year erosion/accretion/net rates. Throws NonPositiveInterval unless
// t2 is at least one day after t1.
ChangeRates annual_rate(const ChangeAreas& areas, const CivilDate& t1, const CivilDate& t2);

// CSV report, fixed schema:
//   category,pixels,area_km2,area_ha,uncertainty_km2
// with rows erosion, accretion, stable_land, stable_water, net.
// Areas are rounded to 3 decimals (km^2) / 1 decimal (ha) at serialization
// only; the struct keeps full precision.
std::string areas_to_csv(const ChangeAreas& a);
void write_areas_csv(const std::string& path, const ChangeAreas& a);

// One parsed CSV row set (used by the report subcommand). Throws
// SchemaMismatch on header or row mismatch.
struct AreasCsvRow {
    double erosion_km2 = 0.0;
    double accretion_km2 = 0.0;
    double net_km2 = 0.0;
};
AreasCsvRow read_areas_csv(const std::string& path);

}  // namespace riverbank
