#include "qmine/nn/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "qmine/common/errors.hpp"

namespace qmine::nn {

std::vector<double> softmax_stable(const std::vector<double>& logits) {
    if (logits.empty()) throw input_error("softmax of empty vector");
    double max = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (size_t k = 0; k < logits.size(); ++k) {
        out[k] = std::exp(logits[k] - max);
        sum += out[k];
    }
    for (double& v : out) v /= sum;
    return out;
}

double cross_entropy(const std::vector<double>& logits, int target, double eps) {
    if (target < 0 || static_cast<size_t>(target) >= logits.size())
        throw input_error("target out of range");
    std::vector<double> probs = softmax_stable(logits);
    double p = std::clamp(probs[static_cast<size_t>(target)], eps, 1.0 - eps);
    return -std::log(p);
}

std::vector<double> cross_entropy_grad(const std::vector<double>& logits, int target) {
    if (target < 0 || static_cast<size_t>(target) >= logits.size())
        throw input_error("target out of range");
    std::vector<double> grad = softmax_stable(logits);
    grad[static_cast<size_t>(target)] -= 1.0;
    return grad;
}

Objective make_ce_objective(double eps) {
    return [eps](const std::vector<double>& logits, const TrainExample& example,
                 std::vector<double>& dlogits) {
        LossParts parts;
        parts.lce = cross_entropy(logits, example.target, eps);
        parts.loss = parts.lce;
        dlogits = cross_entropy_grad(logits, example.target);
        return parts;
    };
}

}  // namespace qmine::nn
