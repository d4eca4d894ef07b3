#include "qmine/analysis/metrics.hpp"

#include "qmine/common/csv.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"

namespace qmine::analysis {

MetricsReport classification_metrics(const std::vector<int>& predictions,
                                     const std::vector<int>& golds,
                                     const std::vector<std::string>& class_names) {
    if (predictions.size() != golds.size())
        throw input_error("predictions and golds differ in length");
    const int k = static_cast<int>(class_names.size());
    for (size_t i = 0; i < golds.size(); ++i)
        if (golds[i] < 0 || golds[i] >= k || predictions[i] < 0 || predictions[i] >= k)
            throw input_error("label index outside class set at position " + std::to_string(i));

    MetricsReport report;
    report.class_names = class_names;
    report.total = static_cast<int64_t>(golds.size());
    report.confusion.assign(k, std::vector<int64_t>(k, 0));
    int64_t correct = 0;
    for (size_t i = 0; i < golds.size(); ++i) {
        report.confusion[golds[i]][predictions[i]] += 1;
        if (golds[i] == predictions[i]) ++correct;
    }
    report.accuracy = report.total ? static_cast<double>(correct) / static_cast<double>(report.total) : 0.0;

    for (int c = 0; c < k; ++c) {
        int64_t tp = report.confusion[c][c];
        int64_t gold_c = 0, pred_c = 0;
        for (int j = 0; j < k; ++j) {
            gold_c += report.confusion[c][j];
            pred_c += report.confusion[j][c];
        }
        ClassMetrics m;
        m.label = class_names[c];
        m.support = gold_c;
        if (pred_c == 0) {
            log_warn("metrics", "no predictions for class " + m.label + ", precision set to 0");
            m.precision = 0.0;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(pred_c);
        }
        if (gold_c == 0) {
            log_warn("metrics", "empty class " + m.label + ", recall set to 0");
            m.recall = 0.0;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(gold_c);
        }
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        report.per_class.push_back(m);

        report.macro_precision += m.precision;
        report.macro_recall += m.recall;
        report.macro_f1 += m.f1;
        double weight = report.total ? static_cast<double>(gold_c) / static_cast<double>(report.total) : 0.0;
        report.weighted_precision += weight * m.precision;
        report.weighted_recall += weight * m.recall;
        report.weighted_f1 += weight * m.f1;
    }
    if (k > 0) {
        report.macro_precision /= k;
        report.macro_recall /= k;
        report.macro_f1 /= k;
    }
    return report;
}

void write_metrics_csv(const MetricsReport& report, const std::string& path) {
    csv::Writer writer(path);
    writer.write_row({"class", "precision", "recall", "f1", "support"});
    for (const ClassMetrics& m : report.per_class) {
        writer.write_row({m.label, csv::format_double(m.precision), csv::format_double(m.recall),
                          csv::format_double(m.f1), std::to_string(m.support)});
    }
    writer.write_row({"accuracy", "", "", csv::format_double(report.accuracy),
                      std::to_string(report.total)});
    writer.write_row({"macro avg", csv::format_double(report.macro_precision),
                      csv::format_double(report.macro_recall), csv::format_double(report.macro_f1),
                      std::to_string(report.total)});
    writer.write_row({"weighted avg", csv::format_double(report.weighted_precision),
                      csv::format_double(report.weighted_recall),
                      csv::format_double(report.weighted_f1), std::to_string(report.total)});
    writer.close();
}

void write_confusion_csv(const MetricsReport& report, const std::string& path) {
    csv::Writer writer(path);
    std::vector<std::string> header{"gold\\pred"};
    header.insert(header.end(), report.class_names.begin(), report.class_names.end());
    writer.write_row(header);
    for (size_t g = 0; g < report.confusion.size(); ++g) {
        std::vector<std::string> row{report.class_names[g]};
        for (int64_t n : report.confusion[g]) row.push_back(std::to_string(n));
        writer.write_row(row);
    }
    writer.close();
}

}  // namespace qmine::analysis
