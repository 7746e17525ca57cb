#include "riverbank/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <json.hpp>

namespace riverbank {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// ---- PNG ----------------------------------------------------------------

struct PngGrid {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 = gray, 3 = rgb
    std::vector<std::uint8_t> data;
};

PngGrid read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    PngGrid g;
    g.width = static_cast<int>(png_get_image_width(png, info));
    g.height = static_cast<int>(png_get_image_height(png, info));
    g.channels = static_cast<int>(png_get_channels(png, info));
    if (g.channels != 1 && g.channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": unsupported channel count after expansion");
    }

    g.data.resize(static_cast<std::size_t>(g.width) * g.height * g.channels);
    std::vector<png_bytep> rows(static_cast<std::size_t>(g.height));
    for (int y = 0; y < g.height; ++y)
        rows[static_cast<std::size_t>(y)] =
            g.data.data() + static_cast<std::size_t>(y) * g.width * g.channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return g;
}

void write_png(const std::string& path, const std::uint8_t* data, int width, int height,
               int channels) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 8, channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width * channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// ---- netpbm -------------------------------------------------------------

void skip_pnm_space(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

PngGrid read_pnm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string magic;
    f >> magic;
    if (magic != "P5" && magic != "P6") throw IoError(path + ": expected binary PGM/PPM");
    PngGrid g;
    g.channels = magic == "P5" ? 1 : 3;
    int maxval = 0;
    skip_pnm_space(f);
    f >> g.width;
    skip_pnm_space(f);
    f >> g.height;
    skip_pnm_space(f);
    f >> maxval;
    if (!f || g.width <= 0 || g.height <= 0 || maxval != 255)
        throw IoError(path + ": bad PNM header (only maxval 255 supported)");
    f.get();  // single whitespace after maxval
    g.data.resize(static_cast<std::size_t>(g.width) * g.height * g.channels);
    f.read(reinterpret_cast<char*>(g.data.data()), static_cast<std::streamsize>(g.data.size()));
    if (static_cast<std::size_t>(f.gcount()) != g.data.size())
        throw IoError(path + ": truncated PNM payload");
    return g;
}

void write_pnm(const std::string& path, const std::uint8_t* data, int width, int height,
               int channels) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << (channels == 1 ? "P5" : "P6") << "\n" << width << " " << height << "\n255\n";
    f.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(static_cast<std::size_t>(width) * height * channels));
}

PngGrid read_gray_or_rgb(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "png") return read_png(path);
    if (ext == "pgm" || ext == "ppm") return read_pnm(path);
    throw IoError(path + ": unsupported raster extension '" + ext + "'");
}

void write_gray_or_rgb(const std::string& path, const std::uint8_t* data, int width, int height,
                       int channels) {
    const std::string ext = lower_ext(path);
    if (ext == "png") {
        write_png(path, data, width, height, channels);
    } else if ((ext == "pgm" && channels == 1) || (ext == "ppm" && channels == 3)) {
        write_pnm(path, data, width, height, channels);
    } else {
        throw IoError(path + ": unsupported raster extension '" + ext + "' for " +
                      std::to_string(channels) + " channel(s)");
    }
}

}  // namespace

BinaryMask read_mask(const std::string& path) {
    const PngGrid g = read_gray_or_rgb(path);
    if (g.channels != 1) throw IoError(path + ": mask files must be single-channel");
    BinaryMask m(g.width, g.height);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::uint8_t v = g.data[i];
        if (v == 0)
            m.data[i] = 0;
        else if (v >= 128)
            m.data[i] = 1;
        else
            throw IoError(path + ": ambiguous mask value " + std::to_string(v) +
                          " (expected 0 or >= 128)");
    }
    return m;
}

void write_mask(const std::string& path, const BinaryMask& mask) {
    std::vector<std::uint8_t> bytes(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask.data[i] ? 255 : 0;
    write_gray_or_rgb(path, bytes.data(), mask.width, mask.height, 1);
}

RgbImage read_rgb(const std::string& path) {
    const PngGrid g = read_gray_or_rgb(path);
    RgbImage img(g.width, g.height);
    if (g.channels == 3) {
        img.data = g.data;
    } else {
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            img.data[i * 3] = img.data[i * 3 + 1] = img.data[i * 3 + 2] = g.data[i];
        }
    }
    return img;
}

void write_rgb(const std::string& path, const RgbImage& img) {
    write_gray_or_rgb(path, img.data.data(), img.width, img.height, 3);
}

ProbMap read_prob_map(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string magic;
    f >> magic;
    if (magic != "Pf") throw IoError(path + ": expected grayscale PFM ('Pf')");
    int w = 0, h = 0;
    double scale = 0.0;
    f >> w >> h >> scale;
    if (!f || w <= 0 || h <= 0 || scale == 0.0) throw IoError(path + ": bad PFM header");
    if (scale > 0.0) throw IoError(path + ": big-endian PFM not supported");
    f.get();  // newline before payload

    std::vector<float> raw(static_cast<std::size_t>(w) * h);
    f.read(reinterpret_cast<char*>(raw.data()),
           static_cast<std::streamsize>(raw.size() * sizeof(float)));
    if (static_cast<std::size_t>(f.gcount()) != raw.size() * sizeof(float))
        throw IoError(path + ": truncated PFM payload");

    // PFM rows are stored bottom-up.
    ProbMap p(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            p.data[static_cast<std::size_t>(y) * w + x] =
                raw[static_cast<std::size_t>(h - 1 - y) * w + x];
    for (double v : p.data)
        if (v < 0.0 || v > 1.0)
            throw IoError(path + ": probability value out of [0, 1]: " + std::to_string(v));
    return p;
}

void write_prob_map(const std::string& path, const ProbMap& p) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "Pf\n" << p.width << " " << p.height << "\n-1.0\n";
    std::vector<float> raw(p.size());
    for (int y = 0; y < p.height; ++y)
        for (int x = 0; x < p.width; ++x)
            raw[static_cast<std::size_t>(p.height - 1 - y) * p.width + x] =
                static_cast<float>(p.data[static_cast<std::size_t>(y) * p.width + x]);
    f.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
}

GeoMeta read_geo_sidecar(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": invalid JSON (" + e.what() + ")");
    }
    GeoMeta geo;
    try {
        geo.resolution_m = j.at("resolution_m").get<double>();
        geo.latitude = j.at("latitude").get<double>();
        geo.longitude = j.at("longitude").get<double>();
        geo.elevation_m = j.at("elevation_m").get<double>();
        geo.capture_date = parse_iso_date(j.at("capture_date").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": missing or mistyped geo key (" + e.what() + ")");
    }
    geo.validate();
    return geo;
}

void write_geo_sidecar(const std::string& path, const GeoMeta& geo) {
    nlohmann::json j;
    j["resolution_m"] = geo.resolution_m;
    j["latitude"] = geo.latitude;
    j["longitude"] = geo.longitude;
    j["elevation_m"] = geo.elevation_m;
    j["capture_date"] = format_iso_date(geo.capture_date);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

}  // namespace riverbank
