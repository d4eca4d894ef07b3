#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmine/analysis/metrics.hpp"
#include "qmine/btclass/level.hpp"
#include "qmine/corpus/types.hpp"
#include "qmine/nn/model_io.hpp"
#include "qmine/nn/trainer.hpp"
#include "qmine/teacher/teacher.hpp"

namespace qmine::btclass {

enum class ExampleOrigin { dasqbt, augmented, mined_irrelevant, human };

const char* origin_name(ExampleOrigin origin);
ExampleOrigin parse_origin(const std::string& name);

struct BTExample {
    std::string text;
    BTLevel label = BTLevel::knowledge;
    ExampleOrigin origin = ExampleOrigin::dasqbt;
};

// JSONL with fields text, label, origin (origin defaults to dasqbt).
std::vector<BTExample> load_bt_examples(const std::string& path);
void save_bt_examples(const std::vector<BTExample>& examples, const std::string& path);

struct SplitResult {
    std::vector<BTExample> train;
    std::vector<BTExample> test;
};

// Stratified by label, deterministic under seed; per-class sizes honored
// within one example. A class with fewer than 2 examples triggers a warning
// and a global (unstratified) split.
SplitResult split_dataset(const std::vector<BTExample>& examples, double train_fraction = 0.8,
                          uint64_t seed = 0);

// Appends generated questions (origin=augmented) cycling over the six levels
// until the returned list reaches target_total. Generation failures beyond
// the teacher's retry budget leave a partial result and a count warning.
std::vector<BTExample> augment_dataset(const std::vector<BTExample>& base,
                                       teacher::Teacher& teacher, size_t target_total = 5779,
                                       uint64_t seed = 0);

struct BTModel {
    nn::Model model;
    nn::TrainResult training;          // empty when loaded from disk
    std::vector<BTLevel> classes;      // report order
};

BTModel train_bt(const std::vector<BTExample>& train, const std::vector<BTExample>& val,
                 const nn::TrainConfig& tcfg, int n_classes);

struct ConfidenceScore {
    std::string question_id;
    double max_class_prob = 0.0;
    BTLevel predicted = BTLevel::knowledge;
    std::string text;  // carried so mined examples keep their wording
};

// Softmax confidence of a stage-1 (6-class) model on extracted questions.
std::vector<ConfidenceScore> score_confidence(const BTModel& model,
                                              const std::vector<corpus::QuestionRecord>& questions);

// The k lowest-confidence items (ties by ascending question_id), labeled
// Irrelevant with origin=mined_irrelevant.
std::vector<BTExample> mine_irrelevant(const std::vector<ConfidenceScore>& scores, size_t k = 500);

struct Stage2Result {
    BTModel model;
    std::vector<BTExample> irrelevant_test;  // held-out 20% of the mined class
};

// Seven-class training on base + augmented + 80% of the mined Irrelevant
// examples. With no augmented and no irrelevant data this is exactly
// train_bt(base_train, val, tcfg, 6).
Stage2Result train_stage2(const std::vector<BTExample>& base_train,
                          const std::vector<BTExample>& val,
                          const std::vector<BTExample>& augmented,
                          const std::vector<BTExample>& irrelevant, const nn::TrainConfig& tcfg);

struct BTPrediction {
    BTLevel label = BTLevel::knowledge;
    std::vector<double> probs;  // over model.classes, sums to 1
};

// Argmax labels plus full probability vectors, stored back onto the records.
std::vector<BTPrediction> classify_bt(const BTModel& model,
                                      std::vector<corpus::QuestionRecord>& questions);

struct HumanSample {
    std::string question_id;
    std::vector<BTLevel> annotations;  // exactly 3
    std::optional<BTLevel> gold;
};

// Strict majority among the 3 annotations, or nothing on a three-way tie.
std::optional<BTLevel> aggregate_human_labels(const HumanSample& sample);

struct AggregationResult {
    std::vector<HumanSample> samples;  // gold filled where a majority exists
    size_t tie_count = 0;
};

AggregationResult aggregate_all(std::vector<HumanSample> samples);

// CSV with header question_id,annotator_id,label; rows grouped by question.
std::vector<HumanSample> load_human_annotations(const std::string& path);

analysis::MetricsReport evaluate_bt(const BTModel& model, const std::vector<BTExample>& test);

void save_bt_model(const std::string& dir, const BTModel& model);
BTModel load_bt_model(const std::string& dir);

}  // namespace qmine::btclass
