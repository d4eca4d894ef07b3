#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmine::analysis {

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int64_t support = 0;
};

struct MetricsReport {
    std::vector<std::string> class_names;
    std::vector<ClassMetrics> per_class;
    // confusion[g][p] counts gold class g predicted as p
    std::vector<std::vector<int64_t>> confusion;
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    int64_t total = 0;
};

// predictions and golds are indices into class_names. Zero-division cases
// (empty class, no predictions for a class) score 0 with a warning.
MetricsReport classification_metrics(const std::vector<int>& predictions,
                                     const std::vector<int>& golds,
                                     const std::vector<std::string>& class_names);

void write_metrics_csv(const MetricsReport& report, const std::string& path);
void write_confusion_csv(const MetricsReport& report, const std::string& path);

}  // namespace qmine::analysis
