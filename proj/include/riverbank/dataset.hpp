#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riverbank/raster.hpp"
#include "riverbank/toml_lite.hpp"

namespace riverbank {

enum class Severity { Low, Medium, High };
enum class Split { Train, Val, Test, Unassigned };

std::string to_string(Severity s);
std::string to_string(Split s);
Severity severity_from_string(const std::string& s);
Split split_from_string(const std::string& s);

// One dataset scene as listed in a JSON-lines manifest.
struct ManifestEntry {
    std::string scene_id;
    std::string image_path;
    std::string mask_path;
    GeoMeta geo;
    std::string site;
    int year = 0;
    Severity severity = Severity::Low;
    Split split = Split::Unassigned;
};

struct SplitCounts {
    std::int64_t train = 0;
    std::int64_t val = 0;
    std::int64_t test = 0;
    std::int64_t total() const { return train + val + test; }
};

// Deterministic xorshift-based draw state. Distribution code is written out
// here rather than taken from <random> so identical seeds give identical
// byte streams on every platform.
class DrawState {
public:
    explicit DrawState(std::uint64_t seed);
    // Derives an independent stream for one scene (used per manifest entry).
    static DrawState for_scene(std::uint64_t seed, const std::string& scene_id,
                               std::uint64_t salt = 0);

    std::uint64_t next_u64();
    double next_unit();                    // [0, 1)
    double next_range(double lo, double hi);
    std::int64_t next_below(std::int64_t n);  // [0, n)

private:
    std::uint64_t state_;
};

// Proportional stratified assignment into train/val/test with
// largest-remainder rounding per (site, year, severity) stratum. Sizes are
// exact; entries beyond counts.total() stay Unassigned. Unless
// allow_site_year_overlap is set, a (site, year) pair spanning two splits is
// a SiteYearOverlap error. Deterministic under seed.
std::vector<ManifestEntry> split_manifest(std::vector<ManifestEntry> entries,
                                          const SplitCounts& counts, std::uint64_t seed,
                                          bool allow_site_year_overlap = false);

struct ElasticParams {
    bool enabled = false;
    double alpha = 34.0;  // displacement scale, px
    double sigma = 4.0;   // gaussian smoothing, px
};

struct PhotometricParams {
    bool enabled = false;
    double max_brightness_delta = 0.2;  // fraction of full scale
    double contrast_min = 0.8;
    double contrast_max = 1.25;
};

struct AugmentationSpec {
    bool flip_horizontal = true;
    bool flip_vertical = true;
    bool rotate90 = true;
    bool rotate180 = true;
    bool rotate270 = true;
    ElasticParams elastic;
    PhotometricParams photometric;
    std::uint64_t seed = 0;

    void validate() const;
};

// Spec file keys (TOML): flips.horizontal, flips.vertical, rotations (array
// of 90/180/270), elastic.{enabled,alpha,sigma},
// photometric.{enabled,max_brightness_delta,contrast_min,contrast_max}, seed.
AugmentationSpec augmentation_spec_from_toml(const TomlTable& t);

// Smoothed random displacement field, one (dx, dy) pair per pixel.
struct DisplacementField {
    int width = 0;
    int height = 0;
    std::vector<double> dx;
    std::vector<double> dy;
};

// Gaussian-smoothed (std sigma) uniform noise in [-1, 1] per axis, scaled by
// alpha. Deterministic under the draw state.
DisplacementField elastic_field(DrawState& draw, double alpha, double sigma, int width,
                                int height);

enum class Interpolation { Nearest, Bilinear };

// Warps by sampling the source at (x + dx, y + dy) with edge clamping.
RgbImage warp(const RgbImage& img, const DisplacementField& field, Interpolation interp);
BinaryMask warp(const BinaryMask& mask, const DisplacementField& field);  // nearest only

// One sampled geometric transform applied identically to image and mask
// (mask via nearest-neighbor), then photometric jitter on the image only.
// The mask stays strictly binary.
std::pair<RgbImage, BinaryMask> augment_pair(const RgbImage& image, const BinaryMask& mask,
                                             const AugmentationSpec& spec, DrawState& draw);

// JSON-lines manifest I/O. Round-trips are byte-identical.
std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);
std::string manifest_entry_to_json(const ManifestEntry& e);

}  // namespace riverbank
