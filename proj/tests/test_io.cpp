#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "riverbank/image_io.hpp"
#include "riverbank/toml_lite.hpp"

using namespace riverbank;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("riverbank_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("mask round-trips through PNG and PGM") {
    TempDir tmp;
    std::mt19937 rng(1);
    const BinaryMask m = test::random_mask(rng, 37, 23);
    for (const char* name : {"m.png", "m.pgm"}) {
        write_mask(tmp.file(name), m);
        CHECK(read_mask(tmp.file(name)) == m);
    }
}

TEST_CASE("ambiguous mask values are rejected") {
    TempDir tmp;
    // Hand-write a PGM with an in-between value.
    std::ofstream f(tmp.file("bad.pgm"), std::ios::binary);
    f << "P5\n2 1\n255\n";
    const unsigned char payload[] = {0, 64};
    f.write(reinterpret_cast<const char*>(payload), 2);
    f.close();
    CHECK_THROWS_AS(read_mask(tmp.file("bad.pgm")), IoError);
}

TEST_CASE("rgb round-trips through PNG and PPM; gray PNG expands") {
    TempDir tmp;
    std::mt19937 rng(2);
    const RgbImage img = test::random_image(rng, 19, 31);
    for (const char* name : {"img.png", "img.ppm"}) {
        write_rgb(tmp.file(name), img);
        CHECK(read_rgb(tmp.file(name)) == img);
    }

    const BinaryMask m = test::random_mask(rng, 8, 8);
    write_mask(tmp.file("gray.png"), m);
    const RgbImage expanded = read_rgb(tmp.file("gray.png"));
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::uint8_t v = m.data[i] ? 255 : 0;
        CHECK(expanded.data[i * 3] == v);
        CHECK(expanded.data[i * 3 + 1] == v);
        CHECK(expanded.data[i * 3 + 2] == v);
    }
}

TEST_CASE("unsupported extensions and missing files throw IoError") {
    TempDir tmp;
    const BinaryMask m(4, 4, 1);
    CHECK_THROWS_AS(write_mask(tmp.file("m.bmp"), m), IoError);
    CHECK_THROWS_AS(read_mask(tmp.file("nothing.png")), IoError);
    CHECK_THROWS_AS(read_rgb(tmp.file("nothing.ppm")), IoError);
}

TEST_CASE("prob maps round-trip through PFM at float32 precision") {
    TempDir tmp;
    std::mt19937 rng(3);
    const ProbMap p = test::random_prob_map(rng, 21, 13, 0.0, 1.0);
    write_prob_map(tmp.file("p.pfm"), p);
    const ProbMap q = read_prob_map(tmp.file("p.pfm"));
    REQUIRE(q.width == p.width);
    REQUIRE(q.height == p.height);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(q.data[i] == doctest::Approx(p.data[i]).epsilon(1e-7));
}

TEST_CASE("pfm reader rejects out-of-range probabilities and bad headers") {
    TempDir tmp;
    {
        std::ofstream f(tmp.file("neg.pfm"), std::ios::binary);
        f << "Pf\n1 1\n-1.0\n";
        const float v = -0.25f;
        f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    CHECK_THROWS_AS(read_prob_map(tmp.file("neg.pfm")), IoError);
    {
        std::ofstream f(tmp.file("rgbpfm.pfm"), std::ios::binary);
        f << "PF\n1 1\n-1.0\n";
        const float v[3] = {0, 0, 0};
        f.write(reinterpret_cast<const char*>(v), sizeof v);
    }
    CHECK_THROWS_AS(read_prob_map(tmp.file("rgbpfm.pfm")), IoError);
}

TEST_CASE("geo sidecar round-trip and validation") {
    TempDir tmp;
    GeoMeta g;
    g.resolution_m = 10.0;
    g.latitude = 23.4567;
    g.longitude = 90.1234;
    g.elevation_m = 6.5;
    g.capture_date = CivilDate{2016, 11, 30};
    write_geo_sidecar(tmp.file("g.json"), g);
    const GeoMeta r = read_geo_sidecar(tmp.file("g.json"));
    CHECK(r.resolution_m == g.resolution_m);
    CHECK(r.latitude == g.latitude);
    CHECK(r.longitude == g.longitude);
    CHECK(r.elevation_m == g.elevation_m);
    CHECK(r.capture_date == g.capture_date);

    {
        std::ofstream f(tmp.file("bad.json"));
        f << R"({"resolution_m": -4, "latitude": 0, "longitude": 0, )"
          << R"("elevation_m": 0, "capture_date": "2020-01-01"})";
    }
    CHECK_THROWS_AS(read_geo_sidecar(tmp.file("bad.json")), NonPositiveResolution);
    {
        std::ofstream f(tmp.file("missing.json"));
        f << R"({"latitude": 0})";
    }
    CHECK_THROWS_AS(read_geo_sidecar(tmp.file("missing.json")), IoError);
}

TEST_CASE("date parsing") {
    CHECK(parse_iso_date("2020-02-29") == CivilDate{2020, 2, 29});
    CHECK_THROWS_AS(parse_iso_date("2021-02-29"), IoError);
    CHECK_THROWS_AS(parse_iso_date("not-a-date"), IoError);
    CHECK(format_iso_date(CivilDate{2003, 7, 4}) == "2003-07-04");
    CHECK(days_between(CivilDate{2020, 1, 1}, CivilDate{2020, 7, 1}) == 182);
    CHECK(days_between(CivilDate{2010, 1, 1}, CivilDate{2020, 1, 1}) == 3652);
}

TEST_CASE("toml parser handles the supported subset") {
    const TomlTable t = parse_toml(R"(
# comment
name = "riverbank"   # trailing comment
count = 42
ratio = 0.75
flag = true
values = [1, 2, 3]
names = ["a", "b"]
[section]
inner = "x"
)");
    CHECK(t.get_string("name", "") == "riverbank");
    CHECK(t.get_int("count", 0) == 42);
    CHECK(t.get_double("ratio", 0.0) == doctest::Approx(0.75));
    CHECK(t.get_bool("flag", false));
    CHECK(t.get_int_array("values") == std::vector<std::int64_t>{1, 2, 3});
    CHECK(t.get_string_array("names") == std::vector<std::string>{"a", "b"});
    CHECK(t.get_string("section.inner", "") == "x");
    CHECK(t.get_int("absent", 7) == 7);

    CHECK_THROWS_AS(parse_toml("no equals sign"), SchemaMismatch);
    CHECK_THROWS_AS(parse_toml("x = "), SchemaMismatch);
    CHECK_THROWS_AS(parse_toml("x = [1, 2"), SchemaMismatch);
    CHECK_THROWS_AS(t.get_int("name", 0), SchemaMismatch);
    CHECK_THROWS_AS(load_toml("/nonexistent/path.toml"), IoError);
}
