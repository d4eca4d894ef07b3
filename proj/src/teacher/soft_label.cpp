#include "qmine/teacher/soft_label.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qmine/common/errors.hpp"

namespace qmine::teacher {

namespace {
constexpr double kEps = 1e-7;
}

SoftLabel soft_label_from_logprob(int label, double logprob) {
    if (label != 0 && label != 1) throw input_error("label must be 0 or 1");
    if (logprob > 0.0) throw input_error("log-probability must be <= 0");
    SoftLabel soft;
    soft.label_token_logprob = logprob;
    double p = std::exp(logprob);
    soft.p_interrogative = label == 1 ? p : 1.0 - p;
    soft.p_non_interrogative = 1.0 - soft.p_interrogative;
    return soft;
}

std::vector<double> smooth_teacher(const std::vector<double>& p, double tau) {
    if (tau <= 0.0) throw config_error("tau must be > 0");
    if (p.empty()) throw input_error("empty probability vector");
    double total = 0.0;
    for (double v : p) total += v;
    if (std::abs(total - 1.0) > 1e-9)
        throw input_error("probability vector does not sum to 1");
    if (tau == 1.0) return p;
    std::vector<double> q(p.size());
    double norm = 0.0;
    for (size_t k = 0; k < p.size(); ++k) {
        double clamped = std::clamp(p[k], kEps, 1.0 - kEps);
        q[k] = std::pow(clamped, 1.0 / tau);
        norm += q[k];
    }
    for (double& v : q) v /= norm;
    return q;
}

std::vector<LowConfidenceItem> low_confidence_report(
    const std::vector<LowConfidenceItem>& labeled, double threshold) {
    std::vector<LowConfidenceItem> out;
    for (const LowConfidenceItem& item : labeled) {
        if (item.logprob > 0.0) throw input_error("log-probability must be <= 0");
        if (item.logprob < threshold) out.push_back(item);
    }
    std::stable_sort(out.begin(), out.end(), [](const LowConfidenceItem& a,
                                                const LowConfidenceItem& b) {
        return a.logprob < b.logprob;
    });
    return out;
}

analysis::MetricsReport agreement_report(const std::vector<btclass::BTLevel>& predicted,
                                         const std::vector<btclass::BTLevel>& original) {
    if (predicted.size() != original.size())
        throw input_error("predicted and original differ in length");
    if (predicted.empty()) throw input_error("empty label lists");
    // Class set restricted to levels that actually occur, in report order.
    std::array<bool, 7> present{};
    for (btclass::BTLevel level : predicted) present[btclass::bt_level_index(level)] = true;
    for (btclass::BTLevel level : original) present[btclass::bt_level_index(level)] = true;
    std::vector<std::string> class_names;
    std::array<int, 7> dense{};
    for (btclass::BTLevel level : btclass::all_bt_levels) {
        int i = btclass::bt_level_index(level);
        if (!present[i]) continue;
        dense[i] = static_cast<int>(class_names.size());
        class_names.push_back(btclass::bt_level_name(level));
    }
    std::vector<int> pred, gold;
    pred.reserve(predicted.size());
    gold.reserve(original.size());
    for (btclass::BTLevel level : predicted) pred.push_back(dense[btclass::bt_level_index(level)]);
    for (btclass::BTLevel level : original) gold.push_back(dense[btclass::bt_level_index(level)]);
    return analysis::classification_metrics(pred, gold, class_names);
}

}  // namespace qmine::teacher
