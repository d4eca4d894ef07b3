#pragma once

#include <string>
#include <vector>

#include "qmine/analysis/metrics.hpp"
#include "qmine/btclass/level.hpp"

namespace qmine::teacher {

struct SoftLabel {
    double p_interrogative = 0.0;
    double p_non_interrogative = 1.0;
    double label_token_logprob = 0.0;
    bool fallback = false;  // provider gave no log-probs; p fixed at 0.99
};

// Binary closure from the predicted label token and its log-probability.
SoftLabel soft_label_from_logprob(int label, double logprob);

// Power transform q_k = p_k^{1/tau} renormalized, after clamping entries to
// [eps, 1-eps]. tau=1 returns p unchanged. Throws config_error on tau <= 0,
// input_error when p does not sum to 1 within 1e-9.
std::vector<double> smooth_teacher(const std::vector<double>& p, double tau);

struct LowConfidenceItem {
    std::string text;
    double logprob = 0.0;
};

// Items with logprob strictly below threshold, ascending by logprob.
std::vector<LowConfidenceItem> low_confidence_report(
    const std::vector<LowConfidenceItem>& labeled, double threshold);

// Multi-class agreement between two label lists (macro averages plus
// exact-match accuracy over the full seven-class set).
analysis::MetricsReport agreement_report(const std::vector<btclass::BTLevel>& predicted,
                                         const std::vector<btclass::BTLevel>& original);

}  // namespace qmine::teacher
