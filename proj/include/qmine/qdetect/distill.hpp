#pragma once

#include <vector>

#include "qmine/nn/objectives.hpp"
#include "qmine/nn/trainer.hpp"

namespace qmine::qdetect {

struct DistillConfig {
    double tau = 2.0;
    double alpha = 2.5;
    double epsilon = 1e-7;  // probability clamp before logs

    void validate() const;
};

struct DistillParts {
    double loss = 0.0;
    double lce = 0.0;
    double lkl = 0.0;  // already weighted by w and tau^2
    double w = 0.0;
};

// Confidence-weighted distillation: L = L_CE + alpha * L_KL with
//   L_CE = -log s_i                      (temperature-1 student probability)
//   w    = 1 - exp(-(log s_i)/(log t_i)) (unsmoothed probabilities)
//   L_KL = w * (-tau^2 * sum_k tt_k * log st_k)
// where st = softmax(logits/tau) and tt is the smoothed teacher. The teacher
// must sum to 1 within 1e-6 and is renormalized before smoothing; accepted
// probabilities are clamped to [epsilon, 1-epsilon] before any log.
// With alpha = 0 the returned loss is exactly cross_entropy(logits, target).
DistillParts distillation_parts(const std::vector<double>& logits, int target,
                                const std::vector<double>& teacher, const DistillConfig& cfg);

double distillation_loss(const std::vector<double>& logits, int target,
                         const std::vector<double>& teacher, const DistillConfig& cfg);

// Analytic d(loss)/d(logits); matches central finite differences away from
// the clamp boundaries.
std::vector<double> distillation_grad(const std::vector<double>& logits, int target,
                                      const std::vector<double>& teacher,
                                      const DistillConfig& cfg);

// Per-example objective for the training loop. With alpha > 0 every example
// must carry a teacher distribution.
nn::Objective make_distill_objective(const DistillConfig& cfg);

}  // namespace qmine::qdetect
