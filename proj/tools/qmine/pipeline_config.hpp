#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmine/corpus/types.hpp"
#include "qmine/nn/trainer.hpp"
#include "qmine/qdetect/distill.hpp"

namespace qmine::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct HarvestSection {
    std::string api_base = "https://www.googleapis.com";
    std::string subject = "biology";
    std::vector<std::string> video_ids;
    int max_videos = 1;
    int comment_cap = 1000;
    int concurrency = 4;
    int min_request_interval_ms = 0;
};

struct DetectorSection {
    std::string kind = "model";  // "model" or "rule"
    std::string model_dir;       // empty: <output_dir>/models/qdetect
    double threshold = 0.5;
    std::string train_data;
    std::string val_data;
    qdetect::DistillConfig distill;
    nn::TrainConfig train;
};

struct BTSection {
    std::string dataset;
    std::string human_annotations;
    double train_fraction = 0.8;
    double val_fraction = 0.1;
    uint64_t k_irrelevant = 500;
    uint64_t augment_target = 0;  // 0 disables augmentation
    std::string llm_cache_dir;    // empty: <cache_dir>/llm
    std::string llm_model = "gpt-4o";
    std::string stage1_dir;  // empty: <output_dir>/models/bt_stage1
    std::string stage2_dir;  // empty: <output_dir>/models/bt_stage2
    nn::TrainConfig train;
};

struct AnalysisSection {
    bool include_irrelevant = false;
    int64_t min_freq = 6;
    uint64_t top_n = 10;
    std::string confusion_csv;  // empty: probe the model dirs
};

struct PipelineConfig {
    uint64_t seed = 0;
    std::string output_dir = "out";
    std::string cache_dir = "cache";
    std::string corpus_dir;      // empty: <output_dir>/corpus
    std::string raw_dir;         // empty: <output_dir>/corpus_raw
    std::string questions_path;  // empty: <output_dir>/questions/questions.jsonl
    std::string labeled_path;    // empty: <output_dir>/labeled/questions.jsonl

    HarvestSection harvest;
    corpus::FilterConfig filters;
    DetectorSection detector;
    BTSection bt;
    AnalysisSection analysis;

    std::string resolved_raw_dir() const;
    std::string resolved_corpus_dir() const;
    std::string resolved_questions_path() const;
    std::string resolved_labeled_path() const;
    std::string resolved_qdetect_dir() const;
    std::string resolved_stage1_dir() const;
    std::string resolved_stage2_dir() const;
    std::string resolved_llm_cache_dir() const;
    std::string questions_dir() const { return output_dir + "/questions"; }
    std::string labeled_dir() const { return output_dir + "/labeled"; }
    std::string analysis_dir() const { return output_dir + "/analysis"; }
    std::string report_dir() const { return output_dir + "/report"; }

    void validate() const;  // throws config_error
};

// Command-line values that override the config file.
struct CliOverrides {
    std::optional<std::string> config_path;
    std::optional<uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<std::string> cache_dir;
};

PipelineConfig load_pipeline_config(const CliOverrides& overrides);

// Canonical serialization of the effective config; stable across runs.
std::string canonical_config_json(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

}  // namespace qmine::cli
