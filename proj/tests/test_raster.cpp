#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "riverbank/components.hpp"
#include "riverbank/morphology.hpp"
#include "riverbank/raster.hpp"

using namespace riverbank;
using test::fill_rect;
using test::random_mask;

namespace {

// Brute-force morphology over the full window, used as the oracle against
// the integral-image implementation.
BinaryMask erode_naive(const BinaryMask& m, int r) {
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool all = true;
            for (int dy = -r; dy <= r && all; ++dy)
                for (int dx = -r; dx <= r && all; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    // Out-of-grid reads as background.
                    if (!m.in_bounds(nx, ny) || m.at(nx, ny) == 0) all = false;
                }
            out.at(x, y) = all ? 1 : 0;
        }
    return out;
}

BinaryMask dilate_naive(const BinaryMask& m, int r) {
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool any = false;
            for (int dy = -r; dy <= r && !any; ++dy)
                for (int dx = -r; dx <= r && !any; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (m.in_bounds(nx, ny) && m.at(nx, ny) == 1) any = true;
                }
            out.at(x, y) = any ? 1 : 0;
        }
    return out;
}

}  // namespace

TEST_CASE("mask_logic basics and errors") {
    std::mt19937 rng(7);
    const BinaryMask a = random_mask(rng, 16, 12);
    const BinaryMask zero(16, 12, 0);

    CHECK(mask_logic(a, a, MaskOp::AndNot) == zero);        // a AND NOT a = 0
    CHECK(mask_logic(a, zero, MaskOp::Or) == a);            // identity element
    CHECK(mask_not(mask_not(a)) == a);

    const BinaryMask wrong(8, 8, 0);
    CHECK_THROWS_AS(mask_logic(a, wrong, MaskOp::And), DimensionMismatch);
    CHECK_NOTHROW(mask_logic(a, wrong, MaskOp::Not));  // unary, second arg ignored
}

TEST_CASE("mask_logic and_not with constructed overlap") {
    // |a| = 60, |b| = 50, overlap 40 -> a AND NOT b has 20 foreground px.
    BinaryMask a(20, 10, 0), b(20, 10, 0);
    fill_rect(a, 0, 0, 5, 9);   // 60 px
    fill_rect(b, 2, 0, 5, 9);   // 40 px overlap
    fill_rect(b, 10, 0, 10, 9); // 10 more, disjoint from a
    REQUIRE(a.foreground_count() == 60);
    REQUIRE(b.foreground_count() == 50);

    std::int64_t overlap = 0;
    for (std::size_t i = 0; i < a.size(); ++i) overlap += a.data[i] & b.data[i];
    REQUIRE(overlap == 40);

    CHECK(mask_logic(a, b, MaskOp::AndNot).foreground_count() == 20);
}

TEST_CASE("mask_logic De Morgan on random masks") {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
        const BinaryMask a = random_mask(rng, 23, 17);
        const BinaryMask b = random_mask(rng, 23, 17);
        // not(a and b) == not a or not b
        CHECK(mask_not(mask_logic(a, b, MaskOp::And)) ==
              mask_logic(mask_not(a), mask_not(b), MaskOp::Or));
        // not(a or b) == not a and not b
        CHECK(mask_not(mask_logic(a, b, MaskOp::Or)) ==
              mask_logic(mask_not(a), mask_not(b), MaskOp::And));
    }
}

TEST_CASE("connected_components trivial cases") {
    const BinaryMask zero(4, 4, 0);
    CHECK(connected_components(zero, Connectivity::Eight).components.empty());

    const BinaryMask ones(4, 4, 1);
    const auto lab = connected_components(ones, Connectivity::Eight);
    REQUIRE(lab.components.size() == 1);
    CHECK(lab.components[0].pixel_count == 16);
    CHECK(lab.components[0].min_x == 0);
    CHECK(lab.components[0].max_x == 3);
}

TEST_CASE("diagonal pixels: 4- vs 8-connectivity") {
    BinaryMask m(4, 4, 0);
    m.at(1, 1) = 1;
    m.at(2, 2) = 1;
    CHECK(connected_components(m, Connectivity::Four).components.size() == 2);
    CHECK(connected_components(m, Connectivity::Eight).components.size() == 1);
}

TEST_CASE("component partition: counts sum to foreground total") {
    std::mt19937 rng(3);
    for (int t = 0; t < 25; ++t) {
        const BinaryMask m = random_mask(rng, 32, 32, 0.4);
        for (const Connectivity conn : {Connectivity::Four, Connectivity::Eight}) {
            const auto lab = connected_components(m, conn);
            std::int64_t sum = 0;
            for (const Component& c : lab.components) sum += c.pixel_count;
            CHECK(sum == m.foreground_count());
            // Every foreground pixel labeled, background unlabeled.
            for (std::size_t i = 0; i < m.size(); ++i)
                CHECK((lab.labels[i] != 0) == (m.data[i] == 1));
        }
    }
}

TEST_CASE("filter_min_area keeps exactly-at-threshold components") {
    // Two components: exactly 500 px (kept) and 499 px (dropped) at min 500.
    BinaryMask two(80, 30, 0);
    fill_rect(two, 0, 0, 24, 19);      // 25 x 20 = 500 px
    fill_rect(two, 40, 0, 64, 18);     // 25 x 19 = 475 px
    fill_rect(two, 40, 19, 63, 19);    // plus 24 px -> 499 px
    const auto lab = connected_components(two, Connectivity::Eight);
    REQUIRE(lab.components.size() == 2);
    REQUIRE(((lab.components[0].pixel_count == 500 && lab.components[1].pixel_count == 499) ||
             (lab.components[0].pixel_count == 499 && lab.components[1].pixel_count == 500)));

    const BinaryMask kept = filter_min_area(two, 500, Connectivity::Eight);
    CHECK(kept.foreground_count() == 500);

    // min 0 is the identity; an impossible threshold clears everything.
    CHECK(filter_min_area(two, 0, Connectivity::Eight) == two);
    CHECK(filter_min_area(two, 1000, Connectivity::Eight).foreground_count() == 0);
}

TEST_CASE("filter_min_area is idempotent and never adds foreground") {
    std::mt19937 rng(21);
    for (int t = 0; t < 20; ++t) {
        const BinaryMask m = random_mask(rng, 32, 32, 0.35);
        const BinaryMask once = filter_min_area(m, 5, Connectivity::Eight);
        CHECK(filter_min_area(once, 5, Connectivity::Eight) == once);
        for (std::size_t i = 0; i < m.size(); ++i) CHECK(once.data[i] <= m.data[i]);
    }
}

TEST_CASE("morphology: speckle removal and hole filling") {
    BinaryMask speck(9, 9, 0);
    speck.at(4, 4) = 1;
    CHECK(morphological(speck, MorphOp::Open, 1).foreground_count() == 0);

    BinaryMask block(9, 9, 0);
    fill_rect(block, 1, 1, 7, 7);
    block.at(4, 4) = 0;  // 1-px hole
    const BinaryMask closed = morphological(block, MorphOp::Close, 1);
    CHECK(closed.at(4, 4) == 1);
    CHECK(closed.foreground_count() == 49);
}

TEST_CASE("morphology matches the brute-force oracle") {
    std::mt19937 rng(5);
    for (int t = 0; t < 15; ++t) {
        const BinaryMask m = random_mask(rng, 21, 19, 0.5);
        for (int r = 1; r <= 3; ++r) {
            CHECK(erode(m, r) == erode_naive(m, r));
            CHECK(dilate(m, r) == dilate_naive(m, r));
        }
    }
}

TEST_CASE("opening is idempotent; open/close bound the input") {
    std::mt19937 rng(9);
    for (int t = 0; t < 50; ++t) {
        const BinaryMask m = random_mask(rng, 32, 32, 0.5);
        const BinaryMask opened = morphological_open(m, 1);
        CHECK(morphological_open(opened, 1) == opened);

        const BinaryMask closed = morphological_close(m, 1);
        CHECK(morphological_close(closed, 1) == closed);

        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(opened.data[i] <= m.data[i]);  // open never adds
            CHECK(closed.data[i] >= m.data[i]);  // close never removes
        }
    }
}

TEST_CASE("morphology rejects non-positive radii") {
    const BinaryMask m(5, 5, 1);
    CHECK_THROWS_AS(erode(m, 0), Error);
    CHECK_THROWS_AS(dilate(m, -1), Error);
    CHECK_THROWS_AS(morphological(m, MorphOp::Close, 0), Error);
}

TEST_CASE("mask validation catches bad payloads") {
    BinaryMask m(3, 3, 0);
    m.data[4] = 2;
    CHECK_THROWS_AS(m.validate(), Error);
    m.data[4] = 1;
    CHECK_NOTHROW(m.validate());
    m.data.pop_back();
    CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("great-circle offset for small latitude steps") {
    // 0.001 deg of latitude is about 111 m.
    const double d = great_circle_m(23.0, 90.0, 23.001, 90.0);
    CHECK(d == doctest::Approx(111.2).epsilon(0.01));
    CHECK(great_circle_m(23.0, 90.0, 23.0, 90.0) == doctest::Approx(0.0));
}
