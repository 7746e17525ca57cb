#pragma once

#include <string>

#include "riverbank/raster.hpp"

namespace riverbank {

// Container is chosen by file extension: .png (libpng), .pgm/.ppm (binary
// netpbm), .pfm (grayscale portable float map, little-endian, bottom-up per
// the format's scale-sign convention).

// Mask files are single-channel 8-bit: 0 = water, >= 128 = land. Values in
// 1..127 are rejected as ambiguous. Masks are written as 0/255.
BinaryMask read_mask(const std::string& path);
void write_mask(const std::string& path, const BinaryMask& mask);

// RGB rasters (.png or .ppm). Grayscale PNG input is expanded to RGB.
RgbImage read_rgb(const std::string& path);
void write_rgb(const std::string& path, const RgbImage& img);

// Float rasters (.pfm), values here are probabilities in [0, 1].
ProbMap read_prob_map(const std::string& path);
void write_prob_map(const std::string& path, const ProbMap& p);

// Sidecar JSON with keys resolution_m, latitude, longitude, elevation_m,
// capture_date (ISO-8601).
GeoMeta read_geo_sidecar(const std::string& path);
void write_geo_sidecar(const std::string& path, const GeoMeta& geo);

}  // namespace riverbank
