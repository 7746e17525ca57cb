#include "riverbank/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace riverbank {

void LossParams::validate() const {
    if (lambda_focal < 0.0 || lambda_dice < 0.0 || lambda_iou < 0.0)
        throw Error("loss weights must be non-negative");
    if (alpha < 0.0 || alpha > 1.0) throw Error("alpha must lie in [0, 1]");
    if (gamma < 0.0) throw Error("gamma must be non-negative");
}

namespace {

void require_same_dims(const ProbMap& p, const BinaryMask& y, const char* where) {
    if (p.width != y.width || p.height != y.height)
        throw DimensionMismatch(std::string(where) + ": " + std::to_string(p.width) + "x" +
                                std::to_string(p.height) + " vs " + std::to_string(y.width) +
                                "x" + std::to_string(y.height));
    if (p.size() == 0) throw EmptyInput(std::string(where) + " on empty input");
}

}  // namespace

LossResult focal_loss(const ProbMap& p, const BinaryMask& y, const LossParams& params) {
    params.validate();
    require_same_dims(p, y, "focal_loss");

    const std::size_t n = p.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    LossResult res;
    res.grad.assign(n, 0.0);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = y.data[i] == 1;
        const double raw = positive ? p.data[i] : 1.0 - p.data[i];
        double pt = std::clamp(raw, kProbClamp, 1.0 - kProbClamp);
        if (pt != raw) ++res.clamped_px;

        const double a = params.alpha_balanced ? (positive ? params.alpha : 1.0 - params.alpha)
                                               : params.alpha;
        const double one_minus = 1.0 - pt;
        const double mod = std::pow(one_minus, params.gamma);
        sum += -a * mod * std::log(pt);

        // d/dpt [-a (1-pt)^g log pt] = a*g*(1-pt)^(g-1)*log(pt) - a*(1-pt)^g/pt
        double dpt = -a * mod / pt;
        if (params.gamma > 0.0)
            dpt += a * params.gamma * std::pow(one_minus, params.gamma - 1.0) * std::log(pt);
        // dpt/dp = +1 for positives, -1 for negatives; clamp is flat outside.
        const double dp = (raw > kProbClamp && raw < 1.0 - kProbClamp)
                              ? (positive ? dpt : -dpt)
                              : 0.0;
        res.grad[i] = dp * inv_n;
    }
    res.value = sum * inv_n;
    return res;
}

LossResult dice_loss(const ProbMap& p, const BinaryMask& y) {
    require_same_dims(p, y, "dice_loss");
    const std::size_t n = p.size();

    double sum_py = 0.0, sum_p = 0.0;
    std::int64_t sum_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_p += p.data[i];
        sum_y += y.data[i];
        if (y.data[i]) sum_py += p.data[i];
    }
    const double denom = sum_p + static_cast<double>(sum_y) + kSoftEps;

    LossResult res;
    res.value = 1.0 - 2.0 * sum_py / denom;
    res.grad.assign(n, 0.0);
    const double denom2 = denom * denom;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = y.data[i];
        // d/dp_i [1 - 2*S_py/D] with dS_py/dp_i = y_i and dD/dp_i = 1.
        res.grad[i] = -2.0 * (yi * denom - sum_py) / denom2;
    }
    return res;
}

LossResult iou_loss(const ProbMap& p, const BinaryMask& y) {
    require_same_dims(p, y, "iou_loss");
    const std::size_t n = p.size();

    double inter = 0.0, sum_p = 0.0;
    std::int64_t sum_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_p += p.data[i];
        sum_y += y.data[i];
        if (y.data[i]) inter += p.data[i];
    }
    const double uni = sum_p + static_cast<double>(sum_y) - inter + kSoftEps;

    LossResult res;
    res.value = 1.0 - inter / uni;
    res.grad.assign(n, 0.0);
    const double uni2 = uni * uni;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = y.data[i];
        // dI/dp_i = y_i, dU/dp_i = 1 - y_i.
        res.grad[i] = -(yi * uni - inter * (1.0 - yi)) / uni2;
    }
    return res;
}

namespace {

double hard_overlap_loss(const ProbMap& p, const BinaryMask& y, double threshold, bool dice) {
    require_same_dims(p, y, "hard overlap loss");
    std::int64_t inter = 0, sum_p = 0, sum_y = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const int ph = p.data[i] > threshold ? 1 : 0;
        sum_p += ph;
        sum_y += y.data[i];
        inter += ph & y.data[i];
    }
    if (dice) {
        const double denom = static_cast<double>(sum_p + sum_y) + kSoftEps;
        return 1.0 - 2.0 * static_cast<double>(inter) / denom;
    }
    const double uni = static_cast<double>(sum_p + sum_y - inter) + kSoftEps;
    return 1.0 - static_cast<double>(inter) / uni;
}

}  // namespace

double dice_loss_hard(const ProbMap& p, const BinaryMask& y, double threshold) {
    return hard_overlap_loss(p, y, threshold, true);
}

double iou_loss_hard(const ProbMap& p, const BinaryMask& y, double threshold) {
    return hard_overlap_loss(p, y, threshold, false);
}

LossResult total_loss(const ProbMap& p, const BinaryMask& y, const LossParams& params) {
    params.validate();
    const LossResult f = focal_loss(p, y, params);
    const LossResult d = dice_loss(p, y);
    const LossResult u = iou_loss(p, y);

    LossResult res;
    res.value = params.lambda_focal * f.value + params.lambda_dice * d.value +
                params.lambda_iou * u.value;
    res.clamped_px = f.clamped_px;
    res.grad.assign(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        res.grad[i] = params.lambda_focal * f.grad[i] + params.lambda_dice * d.grad[i] +
                      params.lambda_iou * u.grad[i];
    return res;
}

double check_gradient(const LossFn& fn, const ProbMap& p, const BinaryMask& y,
                      const LossParams& params, double h) {
    if (!(h > 0.0)) throw Error("check_gradient: step must be positive");
    for (double v : p.data)
        if (v - h < 0.0 || v + h > 1.0)
            throw StepTooLarge("check_gradient: p +/- h leaves [0, 1] (p=" + std::to_string(v) +
                               ", h=" + std::to_string(h) + ")");

    const LossResult analytic = fn(p, y, params);
    double max_rel = 0.0;
    ProbMap probe = p;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double orig = probe.data[i];
        probe.data[i] = orig + h;
        const double up = fn(probe, y, params).value;
        probe.data[i] = orig - h;
        const double down = fn(probe, y, params).value;
        probe.data[i] = orig;

        const double numeric = (up - down) / (2.0 * h);
        const double scale = std::max({std::abs(numeric), std::abs(analytic.grad[i]), 1e-8});
        max_rel = std::max(max_rel, std::abs(numeric - analytic.grad[i]) / scale);
    }
    return max_rel;
}

}  // namespace riverbank
