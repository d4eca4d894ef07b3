#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmine/analysis/metrics.hpp"
#include "qmine/nn/model_io.hpp"
#include "qmine/nn/trainer.hpp"
#include "qmine/qdetect/distill.hpp"
#include "qmine/teacher/soft_label.hpp"

namespace qmine::qdetect {

struct DetectExample {
    std::string text;
    int label = 0;  // 1 = interrogative
    std::optional<teacher::SoftLabel> teacher;
};

std::vector<DetectExample> load_detect_examples(const std::string& path);
void save_detect_examples(const std::vector<DetectExample>& examples, const std::string& path);

struct DetectorModel {
    nn::Model model;
    nn::TrainResult training;  // empty when loaded from disk
};

// Distillation fine-tune; returns the best-validation-F1 checkpoint. With
// alpha > 0 every training example must carry a teacher soft label.
DetectorModel train_detector(const std::vector<DetectExample>& train,
                             const std::vector<DetectExample>& val, const DistillConfig& dcfg,
                             const nn::TrainConfig& tcfg);

struct Prediction {
    int label = 0;
    double p_interrogative = 0.0;
};

// p from the softmax over the two classes; label 1 iff p >= threshold.
// Empty text scores label 0 with p = 0 and a warning.
std::vector<Prediction> predict_interrogative(const DetectorModel& model,
                                              const std::vector<std::string>& texts,
                                              double threshold = 0.5);

analysis::MetricsReport evaluate_detector(const DetectorModel& model,
                                          const std::vector<DetectExample>& test);

void save_detector(const std::string& dir, const DetectorModel& model);
DetectorModel load_detector(const std::string& dir);

}  // namespace qmine::qdetect
