#include "riverbank/quantify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace riverbank {

double pixel_area_m2(double resolution_m) {
    if (!(resolution_m > 0.0))
        throw NonPositiveResolution("pixel_area_m2: resolution must be > 0, got " +
                                    std::to_string(resolution_m));
    return resolution_m * resolution_m;
}

double area_from_pixels(std::int64_t n, double resolution_m, AreaUnit unit) {
    if (n < 0) throw Error("area_from_pixels: negative pixel count");
    if (!(resolution_m > 0.0))
        throw NonPositiveResolution("area_from_pixels: resolution must be > 0, got " +
                                    std::to_string(resolution_m));
    // Extended-precision intermediates so the double result carries a single
    // rounding step; n * r^2 spans enough magnitude that chaining double
    // multiplies and the unit divide would drift past 1 ulp.
    const long double m2 = static_cast<long double>(n) * static_cast<long double>(resolution_m) *
                           static_cast<long double>(resolution_m);
    switch (unit) {
        case AreaUnit::M2: return static_cast<double>(m2);
        case AreaUnit::Ha: return static_cast<double>(m2 / 1e4L);
        case AreaUnit::Km2: return static_cast<double>(m2 / 1e6L);
    }
    return static_cast<double>(m2);
}

ChangeAreas quantify(const ChangeMap& cm, const GeoMeta& geo) {
    geo.validate();
    ChangeAreas a;
    a.resolution_m = geo.resolution_m;

    a.erosion_px = cm.count(ChangeLabel::Erosion);
    a.accretion_px = cm.count(ChangeLabel::Accretion);
    a.stable_land_px = cm.count(ChangeLabel::StableLand);
    a.stable_water_px = cm.count(ChangeLabel::StableWater);
    a.stable_px = a.stable_land_px + a.stable_water_px;

    const double r = geo.resolution_m;
    a.erosion_km2 = area_from_pixels(a.erosion_px, r, AreaUnit::Km2);
    a.accretion_km2 = area_from_pixels(a.accretion_px, r, AreaUnit::Km2);
    a.stable_land_km2 = area_from_pixels(a.stable_land_px, r, AreaUnit::Km2);
    a.stable_water_km2 = area_from_pixels(a.stable_water_px, r, AreaUnit::Km2);
    a.stable_km2 = area_from_pixels(a.stable_px, r, AreaUnit::Km2);
    a.net_change_km2 = a.accretion_km2 - a.erosion_km2;

    // The +-15% accuracy band is established for 0.5-1.0 m/px imagery only;
    // coarser imagery carries the same conservative bound but is flagged as
    // extrapolated.
    a.uncertainty_fraction = 0.15;
    a.uncertainty_extrapolated = r > 1.0;
    return a;
}

ChangeRates annual_rate(const ChangeAreas& areas, const CivilDate& t1, const CivilDate& t2) {
    const std::int64_t days = days_between(t1, t2);
    if (days < 1)
        throw NonPositiveInterval("annual_rate: t2 must be at least one day after t1 (" +
                                  format_iso_date(t1) + " .. " + format_iso_date(t2) + ")");
    ChangeRates r;
    r.years = static_cast<double>(days) / 365.25;
    r.erosion_km2_per_yr = areas.erosion_km2 / r.years;
    r.accretion_km2_per_yr = areas.accretion_km2 / r.years;
    r.net_km2_per_yr = areas.net_change_km2 / r.years;
    return r;
}

namespace {

void append_row(std::string& out, const char* category, std::int64_t px, double km2,
                double uncertainty_fraction) {
    char buf[160];
    const double ha = km2 * 100.0;
    const double unc = uncertainty_fraction * std::abs(km2);
    std::snprintf(buf, sizeof(buf), "%s,%lld,%.3f,%.1f,%.3f\n", category,
                  static_cast<long long>(px), km2, ha, unc);
    out += buf;
}

}  // namespace

std::string areas_to_csv(const ChangeAreas& a) {
    std::string out = "category,pixels,area_km2,area_ha,uncertainty_km2\n";
    append_row(out, "erosion", a.erosion_px, a.erosion_km2, a.uncertainty_fraction);
    append_row(out, "accretion", a.accretion_px, a.accretion_km2, a.uncertainty_fraction);
    append_row(out, "stable_land", a.stable_land_px, a.stable_land_km2, a.uncertainty_fraction);
    append_row(out, "stable_water", a.stable_water_px, a.stable_water_km2,
               a.uncertainty_fraction);
    append_row(out, "net", a.accretion_px - a.erosion_px, a.net_change_km2,
               a.uncertainty_fraction);
    return out;
}

void write_areas_csv(const std::string& path, const ChangeAreas& a) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << areas_to_csv(a);
}

AreasCsvRow read_areas_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw SchemaMismatch(path + ": empty file");
    if (line.ends_with("\r")) line.pop_back();
    if (line != "category,pixels,area_km2,area_ha,uncertainty_km2")
        throw SchemaMismatch(path + ": unexpected header '" + line + "'");

    AreasCsvRow row;
    bool saw_erosion = false, saw_accretion = false, saw_net = false;
    while (std::getline(f, line)) {
        if (line.ends_with("\r")) line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string category, field;
        std::getline(ss, category, ',');
        std::getline(ss, field, ',');  // pixels, unused here
        if (!std::getline(ss, field, ','))
            throw SchemaMismatch(path + ": malformed row '" + line + "'");
        double km2 = 0.0;
        try {
            km2 = std::stod(field);
        } catch (const std::exception&) {
            throw SchemaMismatch(path + ": non-numeric area in row '" + line + "'");
        }
        if (category == "erosion") {
            row.erosion_km2 = km2;
            saw_erosion = true;
        } else if (category == "accretion") {
            row.accretion_km2 = km2;
            saw_accretion = true;
        } else if (category == "net") {
            row.net_km2 = km2;
            saw_net = true;
        } else if (category != "stable_land" && category != "stable_water") {
            throw SchemaMismatch(path + ": unknown category '" + category + "'");
        }
    }
    if (!saw_erosion || !saw_accretion || !saw_net)
        throw SchemaMismatch(path + ": missing erosion/accretion/net rows");
    return row;
}

}  // namespace riverbank
