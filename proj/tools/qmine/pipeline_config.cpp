#include "pipeline_config.hpp"

#include <fstream>
#include <sstream>

#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"
#include "qmine/common/sha256.hpp"

namespace qmine::cli {

using jsonl::json;

std::string PipelineConfig::resolved_raw_dir() const {
    return raw_dir.empty() ? output_dir + "/corpus_raw" : raw_dir;
}

std::string PipelineConfig::resolved_corpus_dir() const {
    return corpus_dir.empty() ? output_dir + "/corpus" : corpus_dir;
}

std::string PipelineConfig::resolved_questions_path() const {
    return questions_path.empty() ? questions_dir() + "/questions.jsonl" : questions_path;
}

std::string PipelineConfig::resolved_labeled_path() const {
    return labeled_path.empty() ? labeled_dir() + "/questions.jsonl" : labeled_path;
}

std::string PipelineConfig::resolved_qdetect_dir() const {
    return detector.model_dir.empty() ? output_dir + "/models/qdetect" : detector.model_dir;
}

std::string PipelineConfig::resolved_stage1_dir() const {
    return bt.stage1_dir.empty() ? output_dir + "/models/bt_stage1" : bt.stage1_dir;
}

std::string PipelineConfig::resolved_stage2_dir() const {
    return bt.stage2_dir.empty() ? output_dir + "/models/bt_stage2" : bt.stage2_dir;
}

std::string PipelineConfig::resolved_llm_cache_dir() const {
    return bt.llm_cache_dir.empty() ? cache_dir + "/llm" : bt.llm_cache_dir;
}

void PipelineConfig::validate() const {
    if (output_dir.empty()) throw config_error("output_dir must not be empty");
    if (cache_dir.empty()) throw config_error("cache_dir must not be empty");
    filters.validate();
    detector.distill.validate();
    detector.train.validate();
    bt.train.validate();
    if (detector.kind != "model" && detector.kind != "rule")
        throw config_error("detector.kind must be \"model\" or \"rule\", got \"" + detector.kind +
                           "\"");
    if (!(detector.threshold > 0.0 && detector.threshold < 1.0))
        throw config_error("detector.threshold must lie in (0, 1)");
    if (!(bt.train_fraction > 0.0 && bt.train_fraction < 1.0))
        throw config_error("bt.train_fraction must lie in (0, 1)");
    if (!(bt.val_fraction > 0.0 && bt.val_fraction < 1.0))
        throw config_error("bt.val_fraction must lie in (0, 1)");
    if (analysis.min_freq < 0) throw config_error("analysis.min_freq must be >= 0");
    if (analysis.top_n == 0) throw config_error("analysis.top_n must be >= 1");
}

namespace {

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw config_error(std::string("config field \"") + key + "\": " + e.what());
    }
}

void read_train(const json& obj, const char* key, nn::TrainConfig& out) {
    if (!obj.contains(key)) return;
    const json& t = obj.at(key);
    if (!t.is_object()) throw config_error(std::string("config field \"") + key + "\" must be an object");
    read_field(t, "learning_rate", out.learning_rate);
    read_field(t, "batch_size", out.batch_size);
    read_field(t, "max_sequence_length", out.max_sequence_length);
    read_field(t, "dropout", out.dropout);
    read_field(t, "epochs", out.epochs);
    read_field(t, "patience", out.patience);
    read_field(t, "encoder_checkpoint", out.encoder_checkpoint);
    read_field(t, "vocab_size", out.vocab_size);
}

json train_json(const nn::TrainConfig& t) {
    return json{{"learning_rate", t.learning_rate},
                {"batch_size", t.batch_size},
                {"max_sequence_length", t.max_sequence_length},
                {"dropout", t.dropout},
                {"epochs", t.epochs},
                {"patience", t.patience},
                {"encoder_checkpoint", t.encoder_checkpoint},
                {"vocab_size", t.vocab_size}};
}

void apply_file(PipelineConfig& config, const json& root) {
    if (!root.is_object()) throw config_error("config file must contain a JSON object");
    read_field(root, "seed", config.seed);
    read_field(root, "output_dir", config.output_dir);
    read_field(root, "cache_dir", config.cache_dir);
    read_field(root, "corpus_dir", config.corpus_dir);
    read_field(root, "raw_dir", config.raw_dir);
    read_field(root, "questions_path", config.questions_path);
    read_field(root, "labeled_path", config.labeled_path);

    if (root.contains("harvest")) {
        const json& h = root.at("harvest");
        read_field(h, "api_base", config.harvest.api_base);
        read_field(h, "subject", config.harvest.subject);
        read_field(h, "video_ids", config.harvest.video_ids);
        read_field(h, "max_videos", config.harvest.max_videos);
        read_field(h, "comment_cap", config.harvest.comment_cap);
        read_field(h, "concurrency", config.harvest.concurrency);
        read_field(h, "min_request_interval_ms", config.harvest.min_request_interval_ms);
    }
    if (root.contains("filters")) {
        const json& f = root.at("filters");
        read_field(f, "comment_min_tokens", config.filters.comment_min_tokens);
        read_field(f, "comment_max_tokens", config.filters.comment_max_tokens);
        read_field(f, "question_min_tokens", config.filters.question_min_tokens);
        read_field(f, "question_max_tokens", config.filters.question_max_tokens);
        read_field(f, "comments_per_video_cap", config.filters.comments_per_video_cap);
    }
    if (root.contains("detector")) {
        const json& d = root.at("detector");
        read_field(d, "kind", config.detector.kind);
        read_field(d, "model_dir", config.detector.model_dir);
        read_field(d, "threshold", config.detector.threshold);
        read_field(d, "train_data", config.detector.train_data);
        read_field(d, "val_data", config.detector.val_data);
        if (d.contains("distill")) {
            const json& k = d.at("distill");
            read_field(k, "tau", config.detector.distill.tau);
            read_field(k, "alpha", config.detector.distill.alpha);
            read_field(k, "epsilon", config.detector.distill.epsilon);
        }
        read_train(d, "train", config.detector.train);
    }
    if (root.contains("bt")) {
        const json& b = root.at("bt");
        read_field(b, "dataset", config.bt.dataset);
        read_field(b, "human_annotations", config.bt.human_annotations);
        read_field(b, "train_fraction", config.bt.train_fraction);
        read_field(b, "val_fraction", config.bt.val_fraction);
        read_field(b, "k_irrelevant", config.bt.k_irrelevant);
        read_field(b, "augment_target", config.bt.augment_target);
        read_field(b, "llm_cache_dir", config.bt.llm_cache_dir);
        read_field(b, "llm_model", config.bt.llm_model);
        read_field(b, "stage1_dir", config.bt.stage1_dir);
        read_field(b, "stage2_dir", config.bt.stage2_dir);
        read_train(b, "train", config.bt.train);
    }
    if (root.contains("analysis")) {
        const json& a = root.at("analysis");
        read_field(a, "include_irrelevant", config.analysis.include_irrelevant);
        read_field(a, "min_freq", config.analysis.min_freq);
        read_field(a, "top_n", config.analysis.top_n);
        read_field(a, "confusion_csv", config.analysis.confusion_csv);
    }
}

}  // namespace

PipelineConfig load_pipeline_config(const CliOverrides& overrides) {
    PipelineConfig config;
    if (overrides.config_path) {
        std::ifstream in(*overrides.config_path, std::ios::binary);
        if (!in) throw config_error("cannot read config file: " + *overrides.config_path);
        json root;
        try {
            in >> root;
        } catch (const json::exception& e) {
            throw config_error("config file " + *overrides.config_path + ": " + e.what());
        }
        apply_file(config, root);
    }
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.output_dir) config.output_dir = *overrides.output_dir;
    if (overrides.cache_dir) config.cache_dir = *overrides.cache_dir;

    // One seed drives every stochastic step.
    config.detector.train.seed = config.seed;
    config.bt.train.seed = config.seed;

    config.validate();
    return config;
}

std::string canonical_config_json(const PipelineConfig& c) {
    json root{
        {"seed", c.seed},
        {"output_dir", c.output_dir},
        {"cache_dir", c.cache_dir},
        {"corpus_dir", c.corpus_dir},
        {"raw_dir", c.raw_dir},
        {"questions_path", c.questions_path},
        {"labeled_path", c.labeled_path},
        {"harvest",
         {{"api_base", c.harvest.api_base},
          {"subject", c.harvest.subject},
          {"video_ids", c.harvest.video_ids},
          {"max_videos", c.harvest.max_videos},
          {"comment_cap", c.harvest.comment_cap},
          {"concurrency", c.harvest.concurrency},
          {"min_request_interval_ms", c.harvest.min_request_interval_ms}}},
        {"filters",
         {{"comment_min_tokens", c.filters.comment_min_tokens},
          {"comment_max_tokens", c.filters.comment_max_tokens},
          {"question_min_tokens", c.filters.question_min_tokens},
          {"question_max_tokens", c.filters.question_max_tokens},
          {"comments_per_video_cap", c.filters.comments_per_video_cap}}},
        {"detector",
         {{"kind", c.detector.kind},
          {"model_dir", c.detector.model_dir},
          {"threshold", c.detector.threshold},
          {"train_data", c.detector.train_data},
          {"val_data", c.detector.val_data},
          {"distill",
           {{"tau", c.detector.distill.tau},
            {"alpha", c.detector.distill.alpha},
            {"epsilon", c.detector.distill.epsilon}}},
          {"train", train_json(c.detector.train)}}},
        {"bt",
         {{"dataset", c.bt.dataset},
          {"human_annotations", c.bt.human_annotations},
          {"train_fraction", c.bt.train_fraction},
          {"val_fraction", c.bt.val_fraction},
          {"k_irrelevant", c.bt.k_irrelevant},
          {"augment_target", c.bt.augment_target},
          {"llm_cache_dir", c.bt.llm_cache_dir},
          {"llm_model", c.bt.llm_model},
          {"stage1_dir", c.bt.stage1_dir},
          {"stage2_dir", c.bt.stage2_dir},
          {"train", train_json(c.bt.train)}}},
        {"analysis",
         {{"include_irrelevant", c.analysis.include_irrelevant},
          {"min_freq", c.analysis.min_freq},
          {"top_n", c.analysis.top_n},
          {"confusion_csv", c.analysis.confusion_csv}}},
    };
    return root.dump(2);
}

std::string config_hash(const PipelineConfig& config) {
    Sha256 h;
    h.update(canonical_config_json(config));
    return h.hex_digest();
}

}  // namespace qmine::cli
