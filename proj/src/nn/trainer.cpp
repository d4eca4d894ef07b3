#include "qmine/nn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmine/analysis/metrics.hpp"
#include "qmine/common/csv.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"
#include "qmine/kernels/kernels.hpp"

namespace qmine::nn {

namespace {

constexpr float kBeta1 = 0.9f;
constexpr float kBeta2 = 0.999f;
constexpr float kAdamEps = 1e-8f;

std::vector<std::string> index_class_names(int n_classes) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(n_classes));
    for (int i = 0; i < n_classes; ++i) names.push_back(std::to_string(i));
    return names;
}

std::vector<int> predict_batch(Encoder& encoder, const std::vector<TrainExample>& examples,
                               size_t begin, size_t end) {
    std::vector<const EncodedExample*> batch;
    std::vector<EncodedExample> storage;
    storage.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) storage.push_back({examples[i].ids});
    for (const EncodedExample& e : storage) batch.push_back(&e);
    std::vector<float> logits = encoder.forward(batch, false, nullptr);
    const size_t C = static_cast<size_t>(encoder.config().n_classes);
    std::vector<int> preds(end - begin, 0);
    for (size_t r = 0; r < preds.size(); ++r) {
        const float* row = logits.data() + r * C;
        preds[r] = static_cast<int>(std::max_element(row, row + C) - row);
    }
    return preds;
}

}  // namespace

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw config_error("learning_rate must be positive");
    if (batch_size < 1) throw config_error("batch_size must be positive");
    if (max_sequence_length < 1) throw config_error("max_sequence_length must be positive");
    if (dropout < 0.0f || dropout >= 1.0f) throw config_error("dropout must be in [0, 1)");
    if (epochs < 1) throw config_error("epochs must be positive");
    if (patience < 1) throw config_error("patience must be positive");
    if (vocab_size < 3) throw config_error("vocab_size must be at least 3");
}

double validation_f1(Encoder& encoder, const std::vector<TrainExample>& val, int batch_size) {
    if (val.empty()) throw input_error("empty validation set");
    const int n_classes = encoder.config().n_classes;
    std::vector<int> preds, golds;
    preds.reserve(val.size());
    golds.reserve(val.size());
    for (size_t begin = 0; begin < val.size(); begin += static_cast<size_t>(batch_size)) {
        size_t end = std::min(val.size(), begin + static_cast<size_t>(batch_size));
        std::vector<int> p = predict_batch(encoder, val, begin, end);
        preds.insert(preds.end(), p.begin(), p.end());
        for (size_t i = begin; i < end; ++i) golds.push_back(val[i].target);
    }
    analysis::MetricsReport report =
        analysis::classification_metrics(preds, golds, index_class_names(n_classes));
    if (n_classes == 2) return report.per_class[1].f1;
    return report.macro_f1;
}

TrainResult train_loop(Encoder& encoder, const std::vector<TrainExample>& train,
                       const std::vector<TrainExample>& val, const Objective& objective,
                       const TrainConfig& config) {
    config.validate();
    if (train.empty()) throw input_error("empty training set");
    if (val.empty()) throw input_error("empty validation set");
    if (!objective) throw input_error("objective is required");
    const size_t C = static_cast<size_t>(encoder.config().n_classes);
    for (const TrainExample& example : train)
        if (example.target < 0 || static_cast<size_t>(example.target) >= C)
            throw input_error("target out of range for " + std::to_string(C) + " classes");

    const kernels::Ops& ops = kernels::active_ops();
    std::vector<float>& params = encoder.params().data();
    std::vector<float> adam_m(params.size(), 0.0f);
    std::vector<float> adam_v(params.size(), 0.0f);

    TrainResult result;
    result.best_weights = params;
    int stale_epochs = 0;
    int64_t step = 0;
    double bc1 = 1.0, bc2 = 1.0;

    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> logits_d(C), dlogits_d(C);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng = make_rng(config.seed, static_cast<uint64_t>(epoch) + 1);
        std::shuffle(order.begin(), order.end(), rng);

        for (size_t begin = 0; begin < order.size();
             begin += static_cast<size_t>(config.batch_size)) {
            size_t end = std::min(order.size(), begin + static_cast<size_t>(config.batch_size));
            const size_t B = end - begin;

            std::vector<EncodedExample> storage;
            storage.reserve(B);
            for (size_t i = begin; i < end; ++i) storage.push_back({train[order[i]].ids});
            std::vector<const EncodedExample*> batch;
            batch.reserve(B);
            for (const EncodedExample& e : storage) batch.push_back(&e);

            std::vector<float> logits = encoder.forward(batch, true, &rng);
            std::vector<float> dlogits(B * C, 0.0f);
            TrainLogRow row;
            row.step = step;
            row.epoch = epoch;
            const double inv_b = 1.0 / static_cast<double>(B);
            for (size_t r = 0; r < B; ++r) {
                const TrainExample& example = train[order[begin + r]];
                for (size_t k = 0; k < C; ++k)
                    logits_d[k] = static_cast<double>(logits[r * C + k]);
                std::fill(dlogits_d.begin(), dlogits_d.end(), 0.0);
                LossParts parts = objective(logits_d, example, dlogits_d);
                row.loss += parts.loss * inv_b;
                row.lce += parts.lce * inv_b;
                row.lkl += parts.lkl * inv_b;
                row.w_mean += parts.w * inv_b;
                for (size_t k = 0; k < C; ++k)
                    dlogits[r * C + k] = static_cast<float>(dlogits_d[k] * inv_b);
            }

            encoder.params().zero_grad();
            encoder.backward(dlogits);

            ++step;
            bc1 *= kBeta1;
            bc2 *= kBeta2;
            const float inv_bc1 = static_cast<float>(1.0 / (1.0 - bc1));
            const float inv_bc2 = static_cast<float>(1.0 / (1.0 - bc2));
            ops.adam_step(params.data(), encoder.params().grad().data(), adam_m.data(),
                          adam_v.data(), params.size(), static_cast<float>(config.learning_rate),
                          kBeta1, kBeta2, kAdamEps, inv_bc1, inv_bc2);
            result.log.push_back(row);
        }

        result.epochs_run = epoch + 1;
        double f1 = validation_f1(encoder, val, config.batch_size);
        log_debug("train", "epoch " + std::to_string(epoch) + " val F1 " + std::to_string(f1));
        if (result.best_epoch < 0 || f1 > result.best_val_f1) {
            result.best_val_f1 = f1;
            result.best_epoch = epoch;
            result.best_weights = params;
            stale_epochs = 0;
        } else if (++stale_epochs >= config.patience) {
            break;
        }
    }

    params = result.best_weights;
    return result;
}

void write_train_log_csv(const std::vector<TrainLogRow>& log, const std::string& path) {
    csv::Writer writer(path);
    writer.write_row({"step", "epoch", "loss", "lce", "lkl", "w_mean"});
    for (const TrainLogRow& row : log) {
        writer.write_row({std::to_string(row.step), std::to_string(row.epoch),
                          csv::format_double(row.loss), csv::format_double(row.lce),
                          csv::format_double(row.lkl), csv::format_double(row.w_mean)});
    }
    writer.close();
}

}  // namespace qmine::nn
