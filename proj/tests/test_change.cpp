#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "riverbank/change.hpp"

using namespace riverbank;
using test::fill_rect;
using test::random_mask;

TEST_CASE("classify_change trivial pairs") {
    const BinaryMask land(8, 8, 1), water(8, 8, 0);

    const ChangeMap all_erosion = classify_change(land, water);
    CHECK(all_erosion.count(ChangeLabel::Erosion) == 64);

    const ChangeMap all_accretion = classify_change(water, land);
    CHECK(all_accretion.count(ChangeLabel::Accretion) == 64);

    std::mt19937 rng(1);
    const BinaryMask m = random_mask(rng, 8, 8);
    const ChangeMap none = classify_change(m, m);
    CHECK(none.count(ChangeLabel::Erosion) == 0);
    CHECK(none.count(ChangeLabel::Accretion) == 0);

    const BinaryMask odd(9, 8, 0);
    CHECK_THROWS_AS(classify_change(land, odd), DimensionMismatch);
}

TEST_CASE("classify_change on the 60/50/40-overlap construction") {
    BinaryMask m1(20, 10, 0), m2(20, 10, 0);
    fill_rect(m1, 0, 0, 5, 9);    // 60 land px at t1
    fill_rect(m2, 2, 0, 5, 9);    // 40 px overlap
    fill_rect(m2, 10, 0, 10, 9);  // 10 new land px
    REQUIRE(m1.foreground_count() == 60);
    REQUIRE(m2.foreground_count() == 50);

    const ChangeMap cm = classify_change(m1, m2);
    CHECK(cm.count(ChangeLabel::Erosion) == 20);
    CHECK(cm.count(ChangeLabel::Accretion) == 10);
    CHECK(cm.count(ChangeLabel::StableLand) == 40);
    CHECK(cm.count(ChangeLabel::StableWater) == 130);
}

TEST_CASE("partition, reconstruction and antisymmetry on random pairs") {
    std::mt19937 rng(42);
    for (int t = 0; t < 100; ++t) {
        const BinaryMask m1 = random_mask(rng, 24, 18);
        const BinaryMask m2 = random_mask(rng, 24, 18);
        const ChangeMap cm = classify_change(m1, m2);

        // Partition: the four labels cover every pixel exactly once.
        CHECK(cm.count(ChangeLabel::Erosion) + cm.count(ChangeLabel::Accretion) +
                  cm.count(ChangeLabel::StableLand) + cm.count(ChangeLabel::StableWater) ==
              static_cast<std::int64_t>(cm.size()));

        // Reconstruction: m1 = Erosion u StableLand, m2 = Accretion u StableLand.
        const BinaryMask r1 = mask_logic(cm.class_mask(ChangeLabel::Erosion),
                                         cm.class_mask(ChangeLabel::StableLand), MaskOp::Or);
        const BinaryMask r2 = mask_logic(cm.class_mask(ChangeLabel::Accretion),
                                         cm.class_mask(ChangeLabel::StableLand), MaskOp::Or);
        CHECK(r1 == m1);
        CHECK(r2 == m2);

        // Antisymmetry: swapping epochs swaps erosion and accretion.
        const ChangeMap rev = classify_change(m2, m1);
        CHECK(rev.class_mask(ChangeLabel::Erosion) == cm.class_mask(ChangeLabel::Accretion));
        CHECK(rev.class_mask(ChangeLabel::Accretion) == cm.class_mask(ChangeLabel::Erosion));
        CHECK(rev.class_mask(ChangeLabel::StableLand) == cm.class_mask(ChangeLabel::StableLand));
        CHECK(rev.class_mask(ChangeLabel::StableWater) ==
              cm.class_mask(ChangeLabel::StableWater));
    }
}

TEST_CASE("filter_change relabels sub-threshold components to their t1 state") {
    // A 499-px erosion blob reverts to StableLand at min 500.
    BinaryMask m1(40, 30, 1);  // all land at t1
    BinaryMask m2 = m1;
    int cleared = 0;
    for (int y = 0; y < 30 && cleared < 499; ++y)
        for (int x = 0; x < 25 && cleared < 499; ++x) {
            m2.at(x, y) = 0;
            ++cleared;
        }
    REQUIRE(cleared == 499);

    const ChangeMap cm = classify_change(m1, m2);
    REQUIRE(cm.count(ChangeLabel::Erosion) == 499);

    const ChangeMap filtered = filter_change(cm, 500, Connectivity::Eight);
    CHECK(filtered.count(ChangeLabel::Erosion) == 0);
    CHECK(filtered.count(ChangeLabel::StableLand) ==
          cm.count(ChangeLabel::StableLand) + 499);
}

TEST_CASE("filter_change keeps exactly-500-px components and min 0 is identity") {
    BinaryMask m1(40, 30, 1);
    BinaryMask m2 = m1;
    fill_rect(m2, 0, 0, 24, 19);  // fill then invert a 25x20 = 500 px region to water
    for (int y = 0; y <= 19; ++y)
        for (int x = 0; x <= 24; ++x) m2.at(x, y) = 0;

    const ChangeMap cm = classify_change(m1, m2);
    REQUIRE(cm.count(ChangeLabel::Erosion) == 500);
    CHECK(filter_change(cm, 500, Connectivity::Eight) == cm);
    CHECK(filter_change(cm, 0, Connectivity::Eight) == cm);
}

TEST_CASE("filter_change accretion reverts to StableWater") {
    BinaryMask m1(20, 20, 0);
    BinaryMask m2(20, 20, 0);
    m2.at(5, 5) = 1;
    m2.at(5, 6) = 1;  // 2-px accretion claim

    const ChangeMap filtered =
        filter_change(classify_change(m1, m2), 3, Connectivity::Eight);
    CHECK(filtered.count(ChangeLabel::Accretion) == 0);
    CHECK(filtered.count(ChangeLabel::StableWater) == 400);
}

TEST_CASE("filter_change is idempotent and preserves pixel count") {
    std::mt19937 rng(77);
    for (int t = 0; t < 30; ++t) {
        const ChangeMap cm = classify_change(random_mask(rng, 32, 32),
                                             random_mask(rng, 32, 32));
        const ChangeMap once = filter_change(cm, 6, Connectivity::Eight);
        CHECK(filter_change(once, 6, Connectivity::Eight) == once);
        CHECK(once.size() == cm.size());
    }
}

TEST_CASE("render_change_map uses the fixed palette") {
    ChangeMap uniform(5, 4, ChangeLabel::StableWater);
    const RgbImage img = render_change_map(uniform);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        CHECK(img.data[i * 3] == kStableWaterColor[0]);
        CHECK(img.data[i * 3 + 1] == kStableWaterColor[1]);
        CHECK(img.data[i * 3 + 2] == kStableWaterColor[2]);
    }

    ChangeMap checker(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x)
            checker.at(x, y) = (x + y) % 2 ? ChangeLabel::Erosion : ChangeLabel::Accretion;
    const RgbImage board = render_change_map(checker);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) {
            const auto& expect = (x + y) % 2 ? kErosionColor : kAccretionColor;
            CHECK(board.px(x, y)[0] == expect[0]);
            CHECK(board.px(x, y)[1] == expect[1]);
            CHECK(board.px(x, y)[2] == expect[2]);
        }
}

TEST_CASE("render color counts on the overlap example") {
    BinaryMask m1(20, 10, 0), m2(20, 10, 0);
    fill_rect(m1, 0, 0, 5, 9);
    fill_rect(m2, 2, 0, 5, 9);
    fill_rect(m2, 10, 0, 10, 9);
    const RgbImage img = render_change_map(classify_change(m1, m2));

    int red = 0, green = 0, gray = 0;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const std::uint8_t* px = &img.data[i * 3];
        if (px[0] == kErosionColor[0] && px[1] == kErosionColor[1] && px[2] == kErosionColor[2])
            ++red;
        if (px[0] == kAccretionColor[0] && px[1] == kAccretionColor[1] &&
            px[2] == kAccretionColor[2])
            ++green;
        if (px[0] == kStableLandColor[0] && px[1] == kStableLandColor[1] &&
            px[2] == kStableLandColor[2])
            ++gray;
    }
    CHECK(red == 20);
    CHECK(green == 10);
    CHECK(gray == 40);
}

TEST_CASE("parse_change_map inverts the renderer and rejects foreign colors") {
    std::mt19937 rng(5);
    const ChangeMap cm = classify_change(random_mask(rng, 13, 9), random_mask(rng, 13, 9));
    CHECK(parse_change_map(render_change_map(cm)) == cm);

    RgbImage bad = render_change_map(cm);
    bad.data[0] = 1;
    bad.data[1] = 2;
    bad.data[2] = 3;
    CHECK_THROWS_AS(parse_change_map(bad), SchemaMismatch);
}

TEST_CASE("check_coregistration") {
    const BinaryMask m(10, 10, 0);
    GeoMeta g;
    g.resolution_m = 10.0;
    g.latitude = 23.5;
    g.longitude = 90.1;

    SUBCASE("identical metadata") {
        const auto rep = check_coregistration(m, g, m, g, 0.01);
        CHECK(rep.dims_match);
        CHECK(rep.resolution_match);
        CHECK(rep.geo_offset_m == doctest::Approx(0.0));
        CHECK(rep.ok());
    }
    SUBCASE("0.5% resolution difference passes a 1% tolerance") {
        GeoMeta g2 = g;
        g2.resolution_m = 10.05;
        CHECK(check_coregistration(m, g, m, g2, 0.01).resolution_match);
        CHECK_FALSE(check_coregistration(m, g, m, g2, 0.001).resolution_match);
    }
    SUBCASE("a millidegree of latitude is ~111 m") {
        GeoMeta g2 = g;
        g2.latitude += 0.001;
        const auto rep = check_coregistration(m, g, m, g2, 0.01);
        CHECK(rep.geo_offset_m == doctest::Approx(111.2).epsilon(0.01));
    }
    SUBCASE("dimension mismatch is reported, not thrown") {
        const BinaryMask other(11, 10, 0);
        const auto rep = check_coregistration(m, g, other, g, 0.01);
        CHECK_FALSE(rep.dims_match);
        CHECK_FALSE(rep.ok());
    }
    SUBCASE("scene overload uses image dimensions") {
        Scene a, b;
        a.image = RgbImage(10, 10);
        a.geo = g;
        b.image = RgbImage(10, 9);
        b.geo = g;
        CHECK_FALSE(check_coregistration(a, b, 0.01).dims_match);
        b.image = RgbImage(10, 10);
        CHECK(check_coregistration(a, b, 0.01).ok());
    }
}

TEST_CASE("scene validation ties mask dimensions to the image") {
    Scene s;
    s.image = RgbImage(8, 6);
    s.geo.resolution_m = 10.0;
    CHECK_NOTHROW(s.validate());
    s.mask = BinaryMask(8, 6, 1);
    CHECK_NOTHROW(s.validate());
    s.mask = BinaryMask(7, 6, 1);
    CHECK_THROWS_AS(s.validate(), DimensionMismatch);
    s.mask.reset();
    s.geo.resolution_m = 0.0;
    CHECK_THROWS_AS(s.validate(), NonPositiveResolution);
}
