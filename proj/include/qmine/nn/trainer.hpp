#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmine/nn/encoder.hpp"

namespace qmine::nn {

struct TrainConfig {
    double learning_rate = 1e-5;
    int batch_size = 16;
    int max_sequence_length = 128;
    float dropout = 0.2f;
    int epochs = 10;
    int patience = 3;  // epochs without a validation F1 improvement
    uint64_t seed = 0;
    std::string encoder_checkpoint = "mini";
    int vocab_size = 8000;

    void validate() const;
};

struct TrainExample {
    std::vector<int> ids;
    int target = 0;
    // teacher distribution over classes when distillation is active
    std::optional<std::vector<double>> teacher;
};

struct LossParts {
    double loss = 0.0;
    double lce = 0.0;
    double lkl = 0.0;
    double w = 0.0;
};

// Per-example objective: reads logits (length n_classes), writes dlogits of
// the same length, returns the loss decomposition. Losses are averaged over
// the batch by the loop, so the objective reports a single example.
using Objective = std::function<LossParts(const std::vector<double>& logits,
                                          const TrainExample& example,
                                          std::vector<double>& dlogits)>;

struct TrainLogRow {
    int64_t step = 0;
    int epoch = 0;
    double loss = 0.0;
    double lce = 0.0;
    double lkl = 0.0;
    double w_mean = 0.0;
};

struct TrainResult {
    std::vector<float> best_weights;
    double best_val_f1 = 0.0;
    int best_epoch = -1;
    int epochs_run = 0;
    std::vector<TrainLogRow> log;
};

// Validation F1: positive-class F1 for binary heads, macro F1 otherwise.
double validation_f1(Encoder& encoder, const std::vector<TrainExample>& val, int batch_size);

// Adam over the flat parameter buffer, seeded shuffling, best-checkpoint
// tracking with early stopping. The encoder ends up holding best_weights.
TrainResult train_loop(Encoder& encoder, const std::vector<TrainExample>& train,
                       const std::vector<TrainExample>& val, const Objective& objective,
                       const TrainConfig& config);

void write_train_log_csv(const std::vector<TrainLogRow>& log, const std::string& path);

}  // namespace qmine::nn
