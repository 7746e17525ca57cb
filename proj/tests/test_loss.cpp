#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "riverbank/loss.hpp"

using namespace riverbank;
using test::random_mask;
using test::random_prob_map;

namespace {

ProbMap prob_from(std::initializer_list<double> vals, int w, int h) {
    ProbMap p(w, h);
    std::size_t i = 0;
    for (double v : vals) p.data[i++] = v;
    REQUIRE(i == p.size());
    return p;
}

BinaryMask mask_from(std::initializer_list<int> vals, int w, int h) {
    BinaryMask m(w, h);
    std::size_t i = 0;
    for (int v : vals) m.data[i++] = static_cast<std::uint8_t>(v);
    REQUIRE(i == m.size());
    return m;
}

}  // namespace

TEST_CASE("focal loss hand-derived single-pixel value") {
    // y=1, p=0.5, alpha=0.25, gamma=2: 0.25 * 0.25 * ln 2.
    const double oracle = 0.25 * 0.25 * std::log(2.0);
    const LossResult r = focal_loss(prob_from({0.5}, 1, 1), mask_from({1}, 1, 1), LossParams{});
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(r.value - 0.043321) < 1e-5);
}

TEST_CASE("focal loss is ~0 at full confidence") {
    ProbMap p(4, 4, 1.0);
    BinaryMask y(4, 4, 1);
    CHECK(focal_loss(p, y, LossParams{}).value < 1e-5);
    // Clamp events are reported.
    CHECK(focal_loss(p, y, LossParams{}).clamped_px == 16);

    ProbMap p0(4, 4, 0.0);
    BinaryMask y0(4, 4, 0);
    CHECK(focal_loss(p0, y0, LossParams{}).value < 1e-5);
}

TEST_CASE("gamma=0, alpha=1 reduces focal to mean binary cross-entropy") {
    std::mt19937 rng(3);
    LossParams params;
    params.gamma = 0.0;
    params.alpha = 1.0;
    for (int t = 0; t < 10; ++t) {
        const ProbMap p = random_prob_map(rng, 8, 8);
        const BinaryMask y = random_mask(rng, 8, 8);
        // Independent cross-entropy oracle.
        double bce = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            bce += y.data[i] ? -std::log(p.data[i]) : -std::log(1.0 - p.data[i]);
        bce /= static_cast<double>(p.size());
        CHECK(focal_loss(p, y, params).value == doctest::Approx(bce).epsilon(1e-12));
    }
}

TEST_CASE("balanced-alpha variant weights the negative class by 1-alpha") {
    const ProbMap p = prob_from({0.5, 0.5}, 2, 1);
    const BinaryMask y = mask_from({1, 0}, 2, 1);
    LossParams sym;  // printed form: same alpha on both classes
    const double per_px = 0.25 * 0.25 * std::log(2.0);
    CHECK(focal_loss(p, y, sym).value == doctest::Approx(per_px).epsilon(1e-12));

    LossParams bal = sym;
    bal.alpha_balanced = true;
    const double expected = (0.25 * 0.25 * std::log(2.0) + 0.75 * 0.25 * std::log(2.0)) / 2.0;
    CHECK(focal_loss(p, y, bal).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dice loss hand-derived values") {
    const ProbMap p = prob_from({0.8, 0.6, 0.4, 0.2}, 4, 1);
    const BinaryMask y = mask_from({1, 1, 0, 0}, 4, 1);
    // 1 - 2*1.4 / (2.0 + 2.0) = 0.3
    CHECK(dice_loss(p, y).value == doctest::Approx(0.3).epsilon(1e-6));

    // Perfect overlap ~ 0, disjoint ~ 1.
    ProbMap hard(3, 2);
    BinaryMask m(3, 2);
    m.data = {1, 0, 1, 1, 0, 0};
    for (std::size_t i = 0; i < m.size(); ++i) hard.data[i] = m.data[i];
    CHECK(dice_loss(hard, m).value == doctest::Approx(0.0).epsilon(1e-5));

    ProbMap anti = hard;
    for (double& v : anti.data) v = 1.0 - v;
    CHECK(dice_loss(anti, m).value == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("iou loss hand-derived values") {
    const ProbMap p = prob_from({0.8, 0.6, 0.4, 0.2}, 4, 1);
    const BinaryMask y = mask_from({1, 1, 0, 0}, 4, 1);
    // I = 1.4, U = 4.0 - 1.4 = 2.6 -> 1 - 1.4/2.6
    const double oracle = 1.0 - 1.4 / 2.6;
    CHECK(iou_loss(p, y).value == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(std::abs(iou_loss(p, y).value - 0.46154) < 1e-5);

    ProbMap hard(4, 1);
    BinaryMask m = mask_from({1, 0, 1, 0}, 4, 1);
    for (std::size_t i = 0; i < m.size(); ++i) hard.data[i] = m.data[i];
    CHECK(iou_loss(hard, m).value == doctest::Approx(0.0).epsilon(1e-5));
    ProbMap anti = hard;
    for (double& v : anti.data) v = 1.0 - v;
    CHECK(iou_loss(anti, m).value == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("total loss composes the weighted sum exactly") {
    std::mt19937 rng(9);
    const ProbMap p = random_prob_map(rng, 6, 5);
    const BinaryMask y = random_mask(rng, 6, 5);
    LossParams params;  // defaults: 20 / 1 / 1

    const double expected = params.lambda_focal * focal_loss(p, y, params).value +
                            params.lambda_dice * dice_loss(p, y).value +
                            params.lambda_iou * iou_loss(p, y).value;
    CHECK(total_loss(p, y, params).value == doctest::Approx(expected).epsilon(1e-12));

    // Weighted sum of the two hand-derived cases: 20*focal(1px) + dice(4px) + iou(4px).
    const double f = focal_loss(prob_from({0.5}, 1, 1), mask_from({1}, 1, 1), params).value;
    const double d =
        dice_loss(prob_from({0.8, 0.6, 0.4, 0.2}, 4, 1), mask_from({1, 1, 0, 0}, 4, 1)).value;
    const double u =
        iou_loss(prob_from({0.8, 0.6, 0.4, 0.2}, 4, 1), mask_from({1, 1, 0, 0}, 4, 1)).value;
    const double composed = 20.0 * f + d + u;
    const double hand = 20.0 * 0.25 * 0.25 * std::log(2.0) + 0.3 + (1.0 - 1.4 / 2.6);
    CHECK(std::abs(composed - hand) < 1e-5);
    CHECK(std::abs(composed - 1.62797) < 1e-4);

    // Annihilation and projection.
    LossParams zero = params;
    zero.lambda_focal = zero.lambda_dice = zero.lambda_iou = 0.0;
    CHECK(total_loss(p, y, zero).value == 0.0);

    LossParams only_focal = params;
    only_focal.lambda_focal = 1.0;
    only_focal.lambda_dice = only_focal.lambda_iou = 0.0;
    CHECK(total_loss(p, y, only_focal).value ==
          doctest::Approx(focal_loss(p, y, params).value).epsilon(1e-12));
}

TEST_CASE("total loss is linear in each weight") {
    std::mt19937 rng(15);
    const ProbMap p = random_prob_map(rng, 5, 5);
    const BinaryMask y = random_mask(rng, 5, 5);
    LossParams a;
    a.lambda_focal = 3.0;
    LossParams b = a;
    b.lambda_focal = 6.0;
    const double base = total_loss(p, y, LossParams{.lambda_focal = 0.0}).value;
    const double la = total_loss(p, y, a).value - base;
    const double lb = total_loss(p, y, b).value - base;
    CHECK(lb == doctest::Approx(2.0 * la).epsilon(1e-9));
}

TEST_CASE("gradient checks against central differences") {
    std::mt19937 rng(21);
    const double h = 1e-5;
    const LossParams params;
    const LossFn fns[] = {
        [](const ProbMap& p, const BinaryMask& y, const LossParams& lp) {
            return focal_loss(p, y, lp);
        },
        [](const ProbMap& p, const BinaryMask& y, const LossParams&) {
            return dice_loss(p, y);
        },
        [](const ProbMap& p, const BinaryMask& y, const LossParams&) { return iou_loss(p, y); },
        [](const ProbMap& p, const BinaryMask& y, const LossParams& lp) {
            return total_loss(p, y, lp);
        },
    };
    for (const LossFn& fn : fns) {
        for (int t = 0; t < 25; ++t) {
            const ProbMap p = random_prob_map(rng, 8, 8, 0.05, 0.95);
            const BinaryMask y = random_mask(rng, 8, 8);
            CHECK(check_gradient(fn, p, y, params, h) < 1e-4);
        }
    }
}

TEST_CASE("gradient check at a smooth constant point is very tight") {
    const ProbMap p(6, 6, 0.5);
    std::mt19937 rng(33);
    const BinaryMask y = random_mask(rng, 6, 6);
    const LossFn dice = [](const ProbMap& pp, const BinaryMask& yy, const LossParams&) {
        return dice_loss(pp, yy);
    };
    CHECK(check_gradient(dice, p, y, LossParams{}, 1e-5) < 1e-6);
}

TEST_CASE("focal gradient stays sound as p_t approaches 1") {
    const LossFn focal = [](const ProbMap& pp, const BinaryMask& yy, const LossParams& lp) {
        return focal_loss(pp, yy, lp);
    };
    const BinaryMask y(3, 3, 1);
    for (double pt : {0.5, 0.8, 0.9, 0.95, 0.99}) {
        const ProbMap p(3, 3, pt);
        CHECK(check_gradient(focal, p, y, LossParams{}, 1e-5) < 1e-3);
    }
}

TEST_CASE("check_gradient rejects steps that leave [0,1]") {
    const ProbMap p(2, 2, 0.999999);
    const BinaryMask y(2, 2, 1);
    const LossFn dice = [](const ProbMap& pp, const BinaryMask& yy, const LossParams&) {
        return dice_loss(pp, yy);
    };
    CHECK_THROWS_AS(check_gradient(dice, p, y, LossParams{}, 1e-5), StepTooLarge);
}

TEST_CASE("raising p where y=1 never increases any component loss") {
    std::mt19937 rng(44);
    for (int t = 0; t < 20; ++t) {
        ProbMap p = random_prob_map(rng, 6, 6, 0.1, 0.85);
        const BinaryMask y = random_mask(rng, 6, 6);
        std::size_t pick = 0;
        while (y.data[pick] == 0) pick = (pick + 1) % y.size();

        const double f0 = focal_loss(p, y, LossParams{}).value;
        const double d0 = dice_loss(p, y).value;
        const double u0 = iou_loss(p, y).value;
        p.data[pick] += 0.1;
        CHECK(focal_loss(p, y, LossParams{}).value <= f0 + 1e-12);
        CHECK(dice_loss(p, y).value <= d0 + 1e-12);
        CHECK(iou_loss(p, y).value <= u0 + 1e-12);
    }
}

TEST_CASE("loss range bounds") {
    std::mt19937 rng(55);
    const double focal_cap = 0.25 * -std::log(kProbClamp);  // alpha * -log(clamp)
    for (int t = 0; t < 30; ++t) {
        ProbMap p = random_prob_map(rng, 7, 7, 0.0, 1.0);
        const BinaryMask y = random_mask(rng, 7, 7);
        const double f = focal_loss(p, y, LossParams{}).value;
        const double d = dice_loss(p, y).value;
        const double u = iou_loss(p, y).value;
        CHECK(f >= 0.0);
        CHECK(f <= focal_cap + 1e-9);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0 + 1e-6);
        CHECK(u >= 0.0);
        CHECK(u <= 1.0 + 1e-6);
    }
}

TEST_CASE("hard-mask dice/jaccard duality: D = 2J/(1+J)") {
    std::mt19937 rng(66);
    for (int t = 0; t < 50; ++t) {
        const BinaryMask y = random_mask(rng, 10, 10);
        ProbMap p(10, 10);
        const BinaryMask other = random_mask(rng, 10, 10);
        for (std::size_t i = 0; i < p.size(); ++i) p.data[i] = other.data[i];

        const double dice = 1.0 - dice_loss_hard(p, y);
        const double jacc = 1.0 - iou_loss_hard(p, y);
        CHECK(dice == doctest::Approx(2.0 * jacc / (1.0 + jacc)).epsilon(1e-6));
    }
}

TEST_CASE("dimension mismatch is rejected everywhere") {
    const ProbMap p(3, 3, 0.5);
    const BinaryMask y(4, 3, 0);
    CHECK_THROWS_AS(focal_loss(p, y, LossParams{}), DimensionMismatch);
    CHECK_THROWS_AS(dice_loss(p, y), DimensionMismatch);
    CHECK_THROWS_AS(iou_loss(p, y), DimensionMismatch);
    CHECK_THROWS_AS(total_loss(p, y, LossParams{}), DimensionMismatch);
}
