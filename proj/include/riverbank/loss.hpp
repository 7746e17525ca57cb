#pragma once

#include <functional>
#include <vector>

#include "riverbank/raster.hpp"

namespace riverbank {

// Hybrid-loss hyperparameters.
struct LossParams {
    double lambda_focal = 20.0;
    double lambda_dice = 1.0;
    double lambda_iou = 1.0;
    double alpha = 0.25;
    double gamma = 2.0;
    // The printed focal form applies one alpha to both classes; the balanced
    // variant uses alpha for positives and 1-alpha for negatives.
    bool alpha_balanced = false;

    void validate() const;
};

// Scalar loss plus its gradient w.r.t. each probability.
struct LossResult {
    double value = 0.0;
    std::vector<double> grad;
    int clamped_px = 0;  // pixels whose probability hit the log clamp
};

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before any log.
inline constexpr double kProbClamp = 1e-7;
// Smoothing added to soft dice/iou denominators only.
inline constexpr double kSoftEps = 1e-6;

// Mean over pixels of -alpha * (1 - p_t)^gamma * log(p_t), with
// p_t = p where y = 1 and 1 - p where y = 0.
LossResult focal_loss(const ProbMap& p, const BinaryMask& y, const LossParams& params);

// Soft dice: 1 - 2*sum(p*y) / (sum(p) + sum(y) + eps).
LossResult dice_loss(const ProbMap& p, const BinaryMask& y);

// Soft IoU: 1 - sum(p*y) / (sum(p) + sum(y) - sum(p*y) + eps).
LossResult iou_loss(const ProbMap& p, const BinaryMask& y);

// Hard-mask (thresholded) dice/iou values, reported alongside the soft
// relaxations; these are not differentiable and carry no gradient.
double dice_loss_hard(const ProbMap& p, const BinaryMask& y, double threshold = 0.5);
double iou_loss_hard(const ProbMap& p, const BinaryMask& y, double threshold = 0.5);

// lambda_focal * focal + lambda_dice * dice + lambda_iou * iou, gradient
// the matching weighted sum.
LossResult total_loss(const ProbMap& p, const BinaryMask& y, const LossParams& params);

using LossFn =
    std::function<LossResult(const ProbMap&, const BinaryMask&, const LossParams&)>;

// Central-difference check of an analytic gradient. Returns the max over
// pixels of |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
// Throws StepTooLarge when any p +/- h leaves [0, 1].
double check_gradient(const LossFn& fn, const ProbMap& p, const BinaryMask& y,
                      const LossParams& params, double h);

}  // namespace riverbank
