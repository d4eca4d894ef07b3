#pragma once

#include <vector>

#include "qmine/nn/trainer.hpp"

namespace qmine::nn {

// Numerically stable softmax in double precision.
std::vector<double> softmax_stable(const std::vector<double>& logits);

// -log(softmax(logits)[target]) with the probability clamped to [eps, 1-eps].
double cross_entropy(const std::vector<double>& logits, int target, double eps = 1e-7);

// d(cross_entropy)/d(logits) = softmax(logits) - onehot(target).
std::vector<double> cross_entropy_grad(const std::vector<double>& logits, int target);

Objective make_ce_objective(double eps = 1e-7);

}  // namespace qmine::nn
