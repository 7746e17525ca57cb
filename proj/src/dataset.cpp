#include "riverbank/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riverbank/date.hpp"

namespace riverbank {

std::string to_string(Severity s) {
    switch (s) {
        case Severity::Low: return "low";
        case Severity::Medium: return "medium";
        case Severity::High: return "high";
    }
    return "low";
}

std::string to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
        case Split::Unassigned: return "unassigned";
    }
    return "unassigned";
}

Severity severity_from_string(const std::string& s) {
    if (s == "low") return Severity::Low;
    if (s == "medium") return Severity::Medium;
    if (s == "high") return Severity::High;
    throw SchemaMismatch("unknown severity '" + s + "'");
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    if (s == "unassigned") return Split::Unassigned;
    throw SchemaMismatch("unknown split '" + s + "'");
}

// ---- DrawState ------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

DrawState::DrawState(std::uint64_t seed) : state_(seed) {
    // Burn one step so seed 0 does not start from the raw zero state.
    splitmix64(state_);
}

DrawState DrawState::for_scene(std::uint64_t seed, const std::string& scene_id,
                               std::uint64_t salt) {
    std::uint64_t mix = seed;
    splitmix64(mix);
    mix ^= fnv1a(scene_id);
    splitmix64(mix);
    mix ^= salt * 0x9e3779b97f4a7c15ULL;
    return DrawState(mix);
}

std::uint64_t DrawState::next_u64() { return splitmix64(state_); }

double DrawState::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DrawState::next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

std::int64_t DrawState::next_below(std::int64_t n) {
    if (n <= 0) throw Error("next_below needs n > 0");
    return static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(n));
}

// ---- split_manifest --------------------------------------------------------

namespace {

void validate_entries(const std::vector<ManifestEntry>& entries) {
    std::set<std::string> ids;
    for (const ManifestEntry& e : entries) {
        if (e.scene_id.empty()) throw SchemaMismatch("manifest entry with empty scene_id");
        if (!ids.insert(e.scene_id).second)
            throw SchemaMismatch("duplicate scene_id '" + e.scene_id + "'");
        if (e.site.empty())
            throw MissingStratumField("entry '" + e.scene_id + "' has no site");
        if (e.year < 1900 || e.year > 2100)
            throw SchemaMismatch("entry '" + e.scene_id + "' has year outside [1900, 2100]");
    }
}

struct Stratum {
    std::string key;
    std::vector<std::size_t> entry_indices;  // into the manifest, seeded-shuffled
    std::size_t cursor = 0;                  // next unassigned entry

    std::size_t remaining() const { return entry_indices.size() - cursor; }
};

}  // namespace

std::vector<ManifestEntry> split_manifest(std::vector<ManifestEntry> entries,
                                          const SplitCounts& counts, std::uint64_t seed,
                                          bool allow_site_year_overlap) {
    if (counts.train < 0 || counts.val < 0 || counts.test < 0)
        throw Error("split counts must be non-negative");
    validate_entries(entries);
    if (counts.total() > static_cast<std::int64_t>(entries.size()))
        throw InsufficientEntries("requested " + std::to_string(counts.total()) +
                                  " entries but manifest has " +
                                  std::to_string(entries.size()));

    for (ManifestEntry& e : entries) e.split = Split::Unassigned;

    // Group into (site, year, severity) strata, deterministically ordered.
    std::map<std::string, Stratum> strata_map;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const ManifestEntry& e = entries[i];
        const std::string key =
            e.site + "\x1f" + std::to_string(e.year) + "\x1f" + to_string(e.severity);
        Stratum& s = strata_map[key];
        s.key = key;
        s.entry_indices.push_back(i);
    }

    std::vector<Stratum> strata;
    strata.reserve(strata_map.size());
    for (auto& [key, s] : strata_map) strata.push_back(std::move(s));

    DrawState draw(seed ^ 0x5741424e4b4e4952ULL);
    for (Stratum& s : strata) {
        // Fisher-Yates with the shared deterministic stream.
        for (std::size_t i = s.entry_indices.size(); i > 1; --i) {
            const std::size_t j =
                static_cast<std::size_t>(draw.next_below(static_cast<std::int64_t>(i)));
            std::swap(s.entry_indices[i - 1], s.entry_indices[j]);
        }
    }

    std::int64_t remaining_total = static_cast<std::int64_t>(entries.size());
    const std::pair<Split, std::int64_t> plan[] = {
        {Split::Train, counts.train}, {Split::Val, counts.val}, {Split::Test, counts.test}};

    for (const auto& [split, want] : plan) {
        if (want == 0) continue;
        // Largest-remainder apportionment of `want` across strata, relative
        // to what each stratum still holds.
        std::vector<std::int64_t> quota(strata.size(), 0);
        std::vector<std::pair<double, std::size_t>> frac;  // (remainder, stratum idx)
        std::int64_t assigned = 0;
        for (std::size_t h = 0; h < strata.size(); ++h) {
            const double share = static_cast<double>(want) *
                                 static_cast<double>(strata[h].remaining()) /
                                 static_cast<double>(remaining_total);
            quota[h] = static_cast<std::int64_t>(std::floor(share));
            quota[h] = std::min(quota[h], static_cast<std::int64_t>(strata[h].remaining()));
            assigned += quota[h];
            frac.emplace_back(share - std::floor(share), h);
        }
        // Ties in the remainder break by seeded order.
        std::vector<std::uint64_t> tiebreak(strata.size());
        for (auto& t : tiebreak) t = draw.next_u64();
        std::stable_sort(frac.begin(), frac.end(),
                         [&](const auto& a, const auto& b) {
                             if (a.first != b.first) return a.first > b.first;
                             return tiebreak[a.second] < tiebreak[b.second];
                         });
        for (std::size_t k = 0; assigned < want; k = (k + 1) % frac.size()) {
            const std::size_t h = frac[k].second;
            if (quota[h] < static_cast<std::int64_t>(strata[h].remaining())) {
                ++quota[h];
                ++assigned;
            }
        }

        for (std::size_t h = 0; h < strata.size(); ++h) {
            for (std::int64_t k = 0; k < quota[h]; ++k) {
                entries[strata[h].entry_indices[strata[h].cursor++]].split = split;
            }
        }
        remaining_total -= want;
    }

    if (!allow_site_year_overlap) {
        std::map<std::string, std::set<Split>> site_year_splits;
        for (const ManifestEntry& e : entries) {
            if (e.split == Split::Unassigned) continue;
            site_year_splits[e.site + "\x1f" + std::to_string(e.year)].insert(e.split);
        }
        for (const auto& [key, splits] : site_year_splits) {
            if (splits.size() > 1) {
                const auto sep = key.find('\x1f');
                throw SiteYearOverlap("site '" + key.substr(0, sep) + "' year " +
                                      key.substr(sep + 1) +
                                      " appears in multiple splits; temporal independence "
                                      "violated (use the override to allow this)");
            }
        }
    }
    return entries;
}

// ---- augmentation ----------------------------------------------------------

void AugmentationSpec::validate() const {
    if (elastic.alpha < 0.0) throw Error("elastic alpha must be >= 0");
    if (elastic.enabled && !(elastic.sigma > 0.0)) throw Error("elastic sigma must be > 0");
    if (photometric.max_brightness_delta < 0.0 || photometric.max_brightness_delta > 1.0)
        throw Error("max_brightness_delta must lie in [0, 1]");
    if (photometric.contrast_min > photometric.contrast_max)
        throw Error("contrast range is inverted");
}

AugmentationSpec augmentation_spec_from_toml(const TomlTable& t) {
    AugmentationSpec spec;
    spec.flip_horizontal = t.get_bool("flips.horizontal", true);
    spec.flip_vertical = t.get_bool("flips.vertical", true);
    if (t.has("rotations")) {
        spec.rotate90 = spec.rotate180 = spec.rotate270 = false;
        for (std::int64_t deg : t.get_int_array("rotations")) {
            if (deg == 90)
                spec.rotate90 = true;
            else if (deg == 180)
                spec.rotate180 = true;
            else if (deg == 270)
                spec.rotate270 = true;
            else
                throw SchemaMismatch("rotation must be 90, 180 or 270, got " +
                                     std::to_string(deg));
        }
    }
    spec.elastic.enabled = t.get_bool("elastic.enabled", false);
    spec.elastic.alpha = t.get_double("elastic.alpha", 34.0);
    spec.elastic.sigma = t.get_double("elastic.sigma", 4.0);
    spec.photometric.enabled = t.get_bool("photometric.enabled", false);
    spec.photometric.max_brightness_delta =
        t.get_double("photometric.max_brightness_delta", 0.2);
    spec.photometric.contrast_min = t.get_double("photometric.contrast_min", 0.8);
    spec.photometric.contrast_max = t.get_double("photometric.contrast_max", 1.25);
    spec.seed = static_cast<std::uint64_t>(t.get_int("seed", 0));
    spec.validate();
    return spec;
}

namespace {

void gaussian_blur_2d(std::vector<double>& grid, int w, int h, double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(radius) + 1);
    double norm = 0.0;
    for (int k = 0; k <= radius; ++k) {
        kernel[static_cast<std::size_t>(k)] =
            std::exp(-0.5 * (static_cast<double>(k) * k) / (sigma * sigma));
        norm += (k == 0 ? 1.0 : 2.0) * kernel[static_cast<std::size_t>(k)];
    }
    for (double& v : kernel) v /= norm;

    std::vector<double> tmp(grid.size());
    // Horizontal pass, clamped at the edges.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = kernel[0] * grid[static_cast<std::size_t>(y) * w + x];
            for (int k = 1; k <= radius; ++k) {
                const int xl = std::max(x - k, 0);
                const int xr = std::min(x + k, w - 1);
                acc += kernel[static_cast<std::size_t>(k)] *
                       (grid[static_cast<std::size_t>(y) * w + xl] +
                        grid[static_cast<std::size_t>(y) * w + xr]);
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    // Vertical pass.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = kernel[0] * tmp[static_cast<std::size_t>(y) * w + x];
            for (int k = 1; k <= radius; ++k) {
                const int yu = std::max(y - k, 0);
                const int yd = std::min(y + k, h - 1);
                acc += kernel[static_cast<std::size_t>(k)] *
                       (tmp[static_cast<std::size_t>(yu) * w + x] +
                        tmp[static_cast<std::size_t>(yd) * w + x]);
            }
            grid[static_cast<std::size_t>(y) * w + x] = acc;
        }
}

double clamp_coord(double v, int n) { return std::clamp(v, 0.0, static_cast<double>(n - 1)); }

}  // namespace

DisplacementField elastic_field(DrawState& draw, double alpha, double sigma, int width,
                                int height) {
    if (!(sigma > 0.0)) throw Error("elastic sigma must be > 0");
    DisplacementField f;
    f.width = width;
    f.height = height;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    f.dx.resize(n);
    f.dy.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.dx[i] = draw.next_range(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) f.dy[i] = draw.next_range(-1.0, 1.0);
    if (alpha == 0.0) {
        std::fill(f.dx.begin(), f.dx.end(), 0.0);
        std::fill(f.dy.begin(), f.dy.end(), 0.0);
        return f;
    }
    gaussian_blur_2d(f.dx, width, height, sigma);
    gaussian_blur_2d(f.dy, width, height, sigma);
    for (std::size_t i = 0; i < n; ++i) {
        f.dx[i] *= alpha;
        f.dy[i] *= alpha;
    }
    return f;
}

RgbImage warp(const RgbImage& img, const DisplacementField& field, Interpolation interp) {
    if (img.width != field.width || img.height != field.height)
        throw DimensionMismatch("warp: field dimensions differ from raster");
    RgbImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
            const double sx = clamp_coord(x + field.dx[i], img.width);
            const double sy = clamp_coord(y + field.dy[i], img.height);
            if (interp == Interpolation::Nearest) {
                const int nx = static_cast<int>(std::lround(sx));
                const int ny = static_cast<int>(std::lround(sy));
                std::copy_n(img.px(nx, ny), 3, out.px(x, y));
            } else {
                const int x0 = static_cast<int>(std::floor(sx));
                const int y0 = static_cast<int>(std::floor(sy));
                const int x1 = std::min(x0 + 1, img.width - 1);
                const int y1 = std::min(y0 + 1, img.height - 1);
                const double fx = sx - x0;
                const double fy = sy - y0;
                for (int c = 0; c < 3; ++c) {
                    const double v =
                        (1 - fx) * (1 - fy) * img.px(x0, y0)[c] +
                        fx * (1 - fy) * img.px(x1, y0)[c] +
                        (1 - fx) * fy * img.px(x0, y1)[c] + fx * fy * img.px(x1, y1)[c];
                    out.px(x, y)[c] = static_cast<std::uint8_t>(std::lround(v));
                }
            }
        }
    return out;
}

BinaryMask warp(const BinaryMask& mask, const DisplacementField& field) {
    if (mask.width != field.width || mask.height != field.height)
        throw DimensionMismatch("warp: field dimensions differ from mask");
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * mask.width + x;
            const int nx = static_cast<int>(
                std::lround(clamp_coord(x + field.dx[i], mask.width)));
            const int ny = static_cast<int>(
                std::lround(clamp_coord(y + field.dy[i], mask.height)));
            out.at(x, y) = mask.at(nx, ny);
        }
    return out;
}

namespace {

enum class GeomOp { HFlip, VFlip, Rot90, Rot180, Rot270, Elastic };

template <typename GetSize, typename CopyPx>
void transform_indexed(GeomOp op, int w, int h, const GetSize& set_size, const CopyPx& copy) {
    switch (op) {
        case GeomOp::HFlip:
            set_size(w, h);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) copy(x, y, w - 1 - x, y);
            break;
        case GeomOp::VFlip:
            set_size(w, h);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) copy(x, y, x, h - 1 - y);
            break;
        case GeomOp::Rot90:  // clockwise
            set_size(h, w);
            for (int y = 0; y < w; ++y)
                for (int x = 0; x < h; ++x) copy(x, y, y, h - 1 - x);
            break;
        case GeomOp::Rot180:
            set_size(w, h);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) copy(x, y, w - 1 - x, h - 1 - y);
            break;
        case GeomOp::Rot270:
            set_size(h, w);
            for (int y = 0; y < w; ++y)
                for (int x = 0; x < h; ++x) copy(x, y, w - 1 - y, x);
            break;
        case GeomOp::Elastic:
            break;  // handled by the caller
    }
}

}  // namespace

std::pair<RgbImage, BinaryMask> augment_pair(const RgbImage& image, const BinaryMask& mask,
                                             const AugmentationSpec& spec, DrawState& draw) {
    spec.validate();
    if (image.width != mask.width || image.height != mask.height)
        throw DimensionMismatch("augment_pair: image and mask dimensions differ");

    std::vector<GeomOp> pool;
    if (spec.flip_horizontal) pool.push_back(GeomOp::HFlip);
    if (spec.flip_vertical) pool.push_back(GeomOp::VFlip);
    if (spec.rotate90) pool.push_back(GeomOp::Rot90);
    if (spec.rotate180) pool.push_back(GeomOp::Rot180);
    if (spec.rotate270) pool.push_back(GeomOp::Rot270);
    if (spec.elastic.enabled) pool.push_back(GeomOp::Elastic);

    RgbImage out_img = image;
    BinaryMask out_mask = mask;

    if (!pool.empty()) {
        const GeomOp op = pool[static_cast<std::size_t>(
            draw.next_below(static_cast<std::int64_t>(pool.size())))];
        if (op == GeomOp::Elastic) {
            const DisplacementField field = elastic_field(draw, spec.elastic.alpha,
                                                          spec.elastic.sigma, image.width,
                                                          image.height);
            out_img = warp(image, field, Interpolation::Bilinear);
            out_mask = warp(mask, field);
        } else {
            transform_indexed(
                op, image.width, image.height,
                [&](int w, int h) {
                    out_img = RgbImage(w, h);
                    out_mask = BinaryMask(w, h);
                },
                [&](int dst_x, int dst_y, int src_x, int src_y) {
                    std::copy_n(image.px(src_x, src_y), 3, out_img.px(dst_x, dst_y));
                    out_mask.at(dst_x, dst_y) = mask.at(src_x, src_y);
                });
        }
    }

    if (spec.photometric.enabled) {
        const double delta = draw.next_range(-spec.photometric.max_brightness_delta,
                                             spec.photometric.max_brightness_delta) *
                             255.0;
        const double factor =
            draw.next_range(spec.photometric.contrast_min, spec.photometric.contrast_max);
        for (std::uint8_t& v : out_img.data) {
            const double adj = (static_cast<double>(v) - 127.5) * factor + 127.5 + delta;
            v = static_cast<std::uint8_t>(std::clamp(std::lround(adj), 0L, 255L));
        }
    }
    return {std::move(out_img), std::move(out_mask)};
}

// ---- manifest I/O ----------------------------------------------------------

std::string manifest_entry_to_json(const ManifestEntry& e) {
    nlohmann::json j;
    j["scene_id"] = e.scene_id;
    j["image_path"] = e.image_path;
    j["mask_path"] = e.mask_path;
    j["geo"] = {{"resolution_m", e.geo.resolution_m},
                {"latitude", e.geo.latitude},
                {"longitude", e.geo.longitude},
                {"elevation_m", e.geo.elevation_m},
                {"capture_date", format_iso_date(e.geo.capture_date)}};
    j["site"] = e.site;
    j["year"] = e.year;
    j["severity"] = to_string(e.severity);
    j["split"] = to_string(e.split);
    return j.dump();
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw SchemaMismatch(path + ":" + std::to_string(lineno) + ": invalid JSON (" +
                                 e.what() + ")");
        }
        try {
            ManifestEntry e;
            e.scene_id = j.at("scene_id").get<std::string>();
            e.image_path = j.at("image_path").get<std::string>();
            e.mask_path = j.at("mask_path").get<std::string>();
            const auto& g = j.at("geo");
            e.geo.resolution_m = g.at("resolution_m").get<double>();
            e.geo.latitude = g.at("latitude").get<double>();
            e.geo.longitude = g.at("longitude").get<double>();
            e.geo.elevation_m = g.at("elevation_m").get<double>();
            e.geo.capture_date = parse_iso_date(g.at("capture_date").get<std::string>());
            e.site = j.at("site").get<std::string>();
            e.year = j.at("year").get<int>();
            e.severity = severity_from_string(j.at("severity").get<std::string>());
            e.split = j.contains("split") ? split_from_string(j.at("split").get<std::string>())
                                          : Split::Unassigned;
            entries.push_back(std::move(e));
        } catch (const nlohmann::json::exception& e) {
            throw SchemaMismatch(path + ":" + std::to_string(lineno) +
                                 ": missing or mistyped field (" + e.what() + ")");
        }
    }
    return entries;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    for (const ManifestEntry& e : entries) f << manifest_entry_to_json(e) << "\n";
}

}  // namespace riverbank
