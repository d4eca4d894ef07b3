#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "pipeline_config.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"

namespace {

using qmine::cli::CliOverrides;
using qmine::cli::PipelineConfig;

int dispatch(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const qmine::cli::exit_error& e) {
        qmine::log_error("cli", e.what());
        return e.code();
    } catch (const qmine::credential_error& e) {
        qmine::log_error("cli", std::string("credential error: ") + e.what());
        return qmine::cli::kExitCredentials;
    } catch (const qmine::dataset_error& e) {
        qmine::log_error("cli", std::string("invalid dataset: ") + e.what());
        return qmine::cli::kExitBadDataset;
    } catch (const qmine::error& e) {
        qmine::log_error("cli", e.what());
        return 1;
    } catch (const std::exception& e) {
        qmine::log_error("cli", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    const PipelineConfig defaults;

    CLI::App app{
        "Mines learner-posed questions from lecture-video comments, trains the interrogative "
        "detector and the cognitive-level classifier, and emits analyses and figures."};
    app.require_subcommand(1);
    app.set_version_flag("--version", qmine::cli::kToolVersion);

    std::string config_path;
    uint64_t seed = defaults.seed;
    std::string output_dir = defaults.output_dir;
    std::string cache_dir = defaults.cache_dir;
    auto* opt_config = app.add_option("--config", config_path, "Pipeline config file (JSON)");
    auto* opt_seed =
        app.add_option("--seed", seed, "Seed for every stochastic step")->capture_default_str();
    auto* opt_output = app.add_option("--output-dir", output_dir, "Root directory for artifacts")
                           ->capture_default_str();
    auto* opt_cache =
        app.add_option("--cache-dir", cache_dir, "Root directory for caches")->capture_default_str();

    auto* sub_harvest = app.add_subcommand(
        "harvest", "Fetch video metadata, transcripts, and comments into the raw corpus");
    std::string h_subject = defaults.harvest.subject;
    int h_max_videos = defaults.harvest.max_videos;
    int h_comment_cap = defaults.harvest.comment_cap;
    std::vector<std::string> h_video_ids;
    auto* o_subject = sub_harvest->add_option("--subject", h_subject, "Subject tag for the videos")
                          ->capture_default_str();
    auto* o_max_videos =
        sub_harvest->add_option("--max-videos", h_max_videos, "How many of the listed videos to fetch")
            ->capture_default_str();
    auto* o_comment_cap =
        sub_harvest
            ->add_option("--comment-cap", h_comment_cap, "Top-level comments fetched per video")
            ->capture_default_str();
    auto* o_video_ids = sub_harvest->add_option(
        "--video-id", h_video_ids, "Video id to fetch (repeatable; replaces the config list)");

    auto* sub_build = app.add_subcommand(
        "build-corpus", "Clean, cap, and filter the raw comments into the working corpus");
    std::string b_corpus_dir;
    auto* o_b_corpus = sub_build->add_option(
        "--corpus-dir", b_corpus_dir, "Where to write the working corpus (default <output-dir>/corpus)");

    auto* sub_extract = app.add_subcommand(
        "extract-questions", "Segment comments into sentences and keep the detected questions");
    std::string x_corpus_dir, x_detector = defaults.detector.kind;
    double x_threshold = defaults.detector.threshold;
    auto* o_x_corpus = sub_extract->add_option(
        "--corpus-dir", x_corpus_dir, "Working corpus to read (default <output-dir>/corpus)");
    auto* o_x_detector =
        sub_extract
            ->add_option("--detector", x_detector,
                         "Detector to use: \"model\" (trained) or \"rule\" (ends-with-?)")
            ->check(CLI::IsMember({"model", "rule"}))
            ->capture_default_str();
    auto* o_x_threshold =
        sub_extract->add_option("--threshold", x_threshold, "Detection probability cutoff")
            ->capture_default_str();

    auto* sub_train =
        app.add_subcommand("train", "Train one model: qdetect, bt-stage1, or bt-stage2");
    std::string train_model;
    sub_train->add_option("model", train_model, "Which model to train")
        ->required()
        ->check(CLI::IsMember({"qdetect", "bt-stage1", "bt-stage2"}));
    std::string t_dataset, t_train_data, t_val_data;
    int t_epochs = defaults.bt.train.epochs;
    int t_batch = defaults.bt.train.batch_size;
    uint64_t t_k = defaults.bt.k_irrelevant;
    uint64_t t_augment = defaults.bt.augment_target;
    auto* o_t_dataset = sub_train->add_option(
        "--dataset", t_dataset, "Labeled question dataset (JSONL) for the bt stages");
    auto* o_t_train_data = sub_train->add_option(
        "--train-data", t_train_data, "Detector training set (JSONL) for qdetect");
    auto* o_t_val_data = sub_train->add_option(
        "--val-data", t_val_data, "Detector validation set (JSONL) for qdetect");
    auto* o_t_epochs =
        sub_train->add_option("--epochs", t_epochs, "Training epochs")->capture_default_str();
    auto* o_t_batch =
        sub_train->add_option("--batch-size", t_batch, "Minibatch size")->capture_default_str();
    auto* o_t_k = sub_train
                      ->add_option("--k-irrelevant", t_k,
                                   "Low-confidence questions mined as the extra class (0 disables)")
                      ->capture_default_str();
    auto* o_t_augment =
        sub_train
            ->add_option("--augment-target", t_augment,
                         "Total training-set size after generation (0 disables)")
            ->capture_default_str();

    auto* sub_classify =
        app.add_subcommand("classify", "Assign a cognitive level to every extracted question");
    std::string c_questions;
    auto* o_c_questions = sub_classify->add_option(
        "--questions", c_questions, "Questions file to label (default <output-dir>/questions/questions.jsonl)");

    auto* sub_analyze = app.add_subcommand(
        "analyze", "Write distribution, verb, engagement, and corpus tables plus figures");
    bool a_include_irrelevant = defaults.analysis.include_irrelevant;
    int64_t a_min_freq = defaults.analysis.min_freq;
    uint64_t a_top_n = defaults.analysis.top_n;
    std::string a_corpus_dir;
    auto* o_a_include =
        sub_analyze
            ->add_flag("--include-irrelevant", a_include_irrelevant,
                       "Keep mined-class questions in the verb and engagement views")
            ->capture_default_str();
    auto* o_a_min_freq =
        sub_analyze
            ->add_option("--min-freq", a_min_freq, "Drop verbs with collection frequency <= this")
            ->capture_default_str();
    auto* o_a_top_n = sub_analyze->add_option("--top-n", a_top_n, "Verbs listed per level")
                          ->capture_default_str();
    auto* o_a_corpus = sub_analyze->add_option(
        "--corpus-dir", a_corpus_dir, "Working corpus to read (default <output-dir>/corpus)");

    auto* sub_report =
        app.add_subcommand("report", "Render one markdown summary linking tables and figures");

    for (CLI::App* sub : {sub_harvest, sub_build, sub_extract, sub_train, sub_classify,
                          sub_analyze, sub_report})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    return dispatch([&]() -> int {
        CliOverrides overrides;
        if (*opt_config) overrides.config_path = config_path;
        if (*opt_seed) overrides.seed = seed;
        if (*opt_output) overrides.output_dir = output_dir;
        if (*opt_cache) overrides.cache_dir = cache_dir;
        PipelineConfig config = qmine::cli::load_pipeline_config(overrides);

        if (app.got_subcommand(sub_harvest)) {
            if (*o_subject) config.harvest.subject = h_subject;
            if (*o_max_videos) config.harvest.max_videos = h_max_videos;
            if (*o_comment_cap) config.harvest.comment_cap = h_comment_cap;
            if (*o_video_ids) config.harvest.video_ids = h_video_ids;
            config.validate();
            return qmine::cli::cmd_harvest(config);
        }
        if (app.got_subcommand(sub_build)) {
            if (*o_b_corpus) config.corpus_dir = b_corpus_dir;
            config.validate();
            return qmine::cli::cmd_build_corpus(config);
        }
        if (app.got_subcommand(sub_extract)) {
            if (*o_x_corpus) config.corpus_dir = x_corpus_dir;
            if (*o_x_detector) config.detector.kind = x_detector;
            if (*o_x_threshold) config.detector.threshold = x_threshold;
            config.validate();
            return qmine::cli::cmd_extract_questions(config);
        }
        if (app.got_subcommand(sub_train)) {
            if (*o_t_dataset) config.bt.dataset = t_dataset;
            if (*o_t_train_data) config.detector.train_data = t_train_data;
            if (*o_t_val_data) config.detector.val_data = t_val_data;
            if (*o_t_epochs) {
                config.detector.train.epochs = t_epochs;
                config.bt.train.epochs = t_epochs;
            }
            if (*o_t_batch) {
                config.detector.train.batch_size = t_batch;
                config.bt.train.batch_size = t_batch;
            }
            if (*o_t_k) config.bt.k_irrelevant = t_k;
            if (*o_t_augment) config.bt.augment_target = t_augment;
            config.validate();
            return qmine::cli::cmd_train(train_model, config);
        }
        if (app.got_subcommand(sub_classify)) {
            if (*o_c_questions) config.questions_path = c_questions;
            config.validate();
            return qmine::cli::cmd_classify(config);
        }
        if (app.got_subcommand(sub_analyze)) {
            if (*o_a_include) config.analysis.include_irrelevant = a_include_irrelevant;
            if (*o_a_min_freq) config.analysis.min_freq = a_min_freq;
            if (*o_a_top_n) config.analysis.top_n = a_top_n;
            if (*o_a_corpus) config.corpus_dir = a_corpus_dir;
            config.validate();
            return qmine::cli::cmd_analyze(config);
        }
        if (app.got_subcommand(sub_report)) {
            config.validate();
            return qmine::cli::cmd_report(config);
        }
        throw qmine::config_error("no command given");
    });
}
