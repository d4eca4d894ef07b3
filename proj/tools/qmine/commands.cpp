#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "figures.hpp"
#include "manifest.hpp"
#include "qmine/analysis/distribution.hpp"
#include "qmine/analysis/metrics.hpp"
#include "qmine/analysis/pmi.hpp"
#include "qmine/btclass/bt.hpp"
#include "qmine/common/csv.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/text.hpp"
#include "qmine/corpus/clean.hpp"
#include "qmine/corpus/filters.hpp"
#include "qmine/corpus/io.hpp"
#include "qmine/corpus/question.hpp"
#include "qmine/corpus/segment.hpp"
#include "qmine/corpus/stats.hpp"
#include "qmine/harvester/client.hpp"
#include "qmine/nn/trainer.hpp"
#include "qmine/qdetect/detect.hpp"
#include "qmine/teacher/llm_client.hpp"
#include "qmine/teacher/teacher.hpp"

namespace qmine::cli {

namespace fs = std::filesystem;

namespace {

// Detection probabilities assigned by the rule-based fallback detector.
constexpr double kRuleProbYes = 0.99;
constexpr double kRuleProbNo = 0.01;

struct PreparedComments {
    std::vector<corpus::CommentRecord> kept;
    size_t n_loaded = 0;
    size_t n_capped = 0;
};

// clean -> cap -> filter, shared by build-corpus, extract-questions, and analyze
// so every stage sees the same working corpus. The cap applies per video, in
// retrieval order, without disturbing the overall sequence.
PreparedComments prepare_comments(std::vector<corpus::CommentRecord> comments,
                                  const corpus::FilterConfig& filters) {
    PreparedComments out;
    out.n_loaded = comments.size();
    for (corpus::CommentRecord& comment : comments)
        if (!comment.raw_text.empty()) comment.clean_text = corpus::clean_comment(comment.raw_text);
    if (filters.comments_per_video_cap < 1) throw config_error("comment cap must be >= 1");
    std::vector<corpus::CommentRecord> capped;
    capped.reserve(comments.size());
    std::unordered_map<std::string, int> seen;
    for (corpus::CommentRecord& comment : comments)
        if (seen[comment.video_id]++ < filters.comments_per_video_cap)
            capped.push_back(std::move(comment));
    out.n_capped = capped.size();
    out.kept = corpus::filter_comments(capped, filters);
    return out;
}

std::vector<corpus::VideoRecord> load_videos_checked(const std::string& dir) {
    const std::string path = dir + "/videos.jsonl";
    if (!fs::exists(path)) throw input_error("no corpus at " + dir + " (missing videos.jsonl)");
    return corpus::load_videos(path);
}

std::vector<corpus::CommentRecord> load_comments_checked(const std::string& dir) {
    const std::string path = dir + "/comments.jsonl";
    if (!fs::exists(path)) throw input_error("no corpus at " + dir + " (missing comments.jsonl)");
    return corpus::load_comments(path);
}

std::vector<corpus::QuestionRecord> load_questions_required(const std::string& path,
                                                            const char* hint) {
    if (!fs::exists(path))
        throw exit_error(kExitBadDataset, "no extracted questions at " + path + "; " + hint);
    return corpus::load_questions(path);
}

btclass::BTModel load_bt_model_required(const std::string& dir) {
    try {
        return btclass::load_bt_model(dir);
    } catch (const not_found_error& e) {
        throw exit_error(kExitMissingModel, std::string("model missing: ") + e.what());
    }
}

void save_model_reports(const analysis::MetricsReport& report, const std::string& dir) {
    analysis::write_metrics_csv(report, dir + "/metrics.csv");
    analysis::write_confusion_csv(report, dir + "/confusion.csv");
}

std::vector<std::pair<std::string, std::string>> model_input_files(const std::string& dir) {
    return {{"model_config.json", dir + "/config.json"},
            {"model_weights.bin", dir + "/weights.bin"}};
}

std::string summarize_training(const nn::TrainResult& training) {
    std::ostringstream out;
    out << "best val F1 " << csv::format_double(training.best_val_f1, 4) << " at epoch "
        << training.best_epoch << " (" << training.epochs_run << " epochs run)";
    return out.str();
}

}  // namespace

int cmd_harvest(const PipelineConfig& config) {
    harvester::ClientConfig client_config;
    client_config.api_base = config.harvest.api_base;
    client_config.cache_dir = config.cache_dir + "/video";
    client_config.concurrency = config.harvest.concurrency;
    client_config.min_request_interval_ms = config.harvest.min_request_interval_ms;

    harvester::HarvestSpec spec;
    spec.video_ids = config.harvest.video_ids;
    spec.subject = corpus::parse_subject(config.harvest.subject);
    spec.max_videos = config.harvest.max_videos;
    spec.comments_per_video_cap = config.harvest.comment_cap;
    spec.validate();

    harvester::VideoApiClient client(client_config);
    harvester::HarvestResult result = harvester::harvest(client, spec);

    const std::string dir = config.resolved_raw_dir();
    fs::create_directories(dir);
    corpus::save_videos(result.videos, dir + "/videos.jsonl");
    corpus::save_comments(result.comments, dir + "/comments.jsonl");
    write_manifest(dir, "harvest", config_hash(config), {});
    log_info("cli", "harvested " + std::to_string(result.videos.size()) + " videos, " +
                        std::to_string(result.comments.size()) + " comments -> " + dir);
    return 0;
}

int cmd_build_corpus(const PipelineConfig& config) {
    const std::string raw = config.resolved_raw_dir();
    auto videos = load_videos_checked(raw);
    PreparedComments prepared = prepare_comments(load_comments_checked(raw), config.filters);

    const std::string dir = config.resolved_corpus_dir();
    fs::create_directories(dir);
    corpus::save_videos(videos, dir + "/videos.jsonl");
    corpus::save_comments(prepared.kept, dir + "/comments.jsonl");
    write_manifest(dir, "build-corpus", config_hash(config),
                   {{"videos.jsonl", raw + "/videos.jsonl"},
                    {"comments.jsonl", raw + "/comments.jsonl"}});
    log_info("cli", "kept " + std::to_string(prepared.kept.size()) + " of " +
                        std::to_string(prepared.n_loaded) + " comments (" +
                        std::to_string(prepared.n_capped) + " after the per-video cap) -> " + dir);
    return 0;
}

int cmd_extract_questions(const PipelineConfig& config) {
    const std::string corpus_dir = config.resolved_corpus_dir();
    auto videos = load_videos_checked(corpus_dir);
    PreparedComments prepared = prepare_comments(load_comments_checked(corpus_dir), config.filters);

    std::unordered_map<std::string, corpus::SubjectTag> subject_of;
    for (const corpus::VideoRecord& video : videos) subject_of[video.video_id] = video.subject;

    std::vector<corpus::SentenceCandidate> candidates;
    for (const corpus::CommentRecord& comment : prepared.kept) {
        auto it = subject_of.find(comment.video_id);
        if (it == subject_of.end())
            throw input_error("comment " + comment.comment_id + " references unknown video " +
                              comment.video_id);
        auto sentences = corpus::segment_sentences(comment.clean_text);
        for (size_t i = 0; i < sentences.size(); ++i) {
            corpus::SentenceCandidate candidate;
            candidate.text = sentences[i];
            candidate.comment_id = comment.comment_id;
            candidate.video_id = comment.video_id;
            candidate.subject = it->second;
            candidate.sentence_index = static_cast<int>(i);
            candidates.push_back(std::move(candidate));
        }
    }

    std::vector<std::pair<std::string, std::string>> inputs{
        {"videos.jsonl", corpus_dir + "/videos.jsonl"},
        {"comments.jsonl", corpus_dir + "/comments.jsonl"}};

    if (config.detector.kind == "rule") {
        for (corpus::SentenceCandidate& candidate : candidates) {
            std::string trimmed = text::trim(candidate.text);
            bool interrogative = !trimmed.empty() && trimmed.back() == '?';
            candidate.detection_prob = interrogative ? kRuleProbYes : kRuleProbNo;
        }
    } else {
        const std::string model_dir = config.resolved_qdetect_dir();
        qdetect::DetectorModel detector;
        try {
            detector = qdetect::load_detector(model_dir);
        } catch (const not_found_error& e) {
            throw exit_error(kExitMissingModel, std::string("detector model missing: ") + e.what());
        }
        std::vector<std::string> texts;
        texts.reserve(candidates.size());
        for (const corpus::SentenceCandidate& candidate : candidates) texts.push_back(candidate.text);
        auto predictions =
            qdetect::predict_interrogative(detector, texts, config.detector.threshold);
        for (size_t i = 0; i < candidates.size(); ++i)
            candidates[i].detection_prob = predictions[i].p_interrogative;
        for (const auto& [label, path] : model_input_files(model_dir))
            inputs.emplace_back(label, path);
    }

    auto questions = corpus::make_question_records(candidates, config.filters,
                                                   config.detector.threshold);
    if (prepared.kept.empty())
        log_warn("cli", "corpus has no usable comments; writing an empty question set");

    const std::string dir = config.questions_dir();
    fs::create_directories(dir);
    corpus::save_questions(questions, config.resolved_questions_path());
    write_manifest(dir, "extract-questions", config_hash(config), inputs);
    log_info("cli", "extracted " + std::to_string(questions.size()) + " questions from " +
                        std::to_string(candidates.size()) + " sentences -> " +
                        config.resolved_questions_path());
    return 0;
}

namespace {

int train_qdetect(const PipelineConfig& config) {
    if (config.detector.train_data.empty() || config.detector.val_data.empty())
        throw config_error("train qdetect needs detector.train_data and detector.val_data");
    auto train = qdetect::load_detect_examples(config.detector.train_data);
    auto val = qdetect::load_detect_examples(config.detector.val_data);

    qdetect::DetectorModel model =
        qdetect::train_detector(train, val, config.detector.distill, config.detector.train);

    const std::string dir = config.resolved_qdetect_dir();
    qdetect::save_detector(dir, model);
    nn::write_train_log_csv(model.training.log, dir + "/train_log.csv");
    save_model_reports(qdetect::evaluate_detector(model, val), dir);
    write_manifest(dir, "train qdetect", config_hash(config),
                   {{"train.jsonl", config.detector.train_data},
                    {"val.jsonl", config.detector.val_data}});
    log_info("cli", "detector: " + summarize_training(model.training) + " -> " + dir);
    return 0;
}

struct BTSplits {
    std::vector<btclass::BTExample> train;
    std::vector<btclass::BTExample> val;
    std::vector<btclass::BTExample> test;
};

BTSplits make_bt_splits(const PipelineConfig& config) {
    if (config.bt.dataset.empty()) throw config_error("train bt-* needs bt.dataset");
    auto examples = btclass::load_bt_examples(config.bt.dataset);
    auto held_out = btclass::split_dataset(examples, config.bt.train_fraction, config.seed);
    auto train_val =
        btclass::split_dataset(held_out.train, 1.0 - config.bt.val_fraction, config.seed + 1);
    return {std::move(train_val.train), std::move(train_val.test), std::move(held_out.test)};
}

int train_bt_stage1(const PipelineConfig& config) {
    BTSplits splits = make_bt_splits(config);
    btclass::BTModel model = btclass::train_bt(splits.train, splits.val, config.bt.train, 6);

    const std::string dir = config.resolved_stage1_dir();
    btclass::save_bt_model(dir, model);
    nn::write_train_log_csv(model.training.log, dir + "/train_log.csv");
    btclass::save_bt_examples(splits.test, dir + "/test.jsonl");
    save_model_reports(btclass::evaluate_bt(model, splits.test), dir);
    write_manifest(dir, "train bt-stage1", config_hash(config),
                   {{"dataset.jsonl", config.bt.dataset}});
    log_info("cli", "stage-1: " + summarize_training(model.training) + " -> " + dir);
    return 0;
}

int train_bt_stage2(const PipelineConfig& config) {
    const std::string stage1_dir = config.resolved_stage1_dir();
    btclass::BTModel stage1 = load_bt_model_required(stage1_dir);
    BTSplits splits = make_bt_splits(config);

    std::vector<std::pair<std::string, std::string>> inputs{
        {"dataset.jsonl", config.bt.dataset}};
    for (const auto& [label, path] : model_input_files(stage1_dir))
        inputs.emplace_back("stage1_" + label, path);

    std::vector<btclass::BTExample> mined;
    if (config.bt.k_irrelevant > 0) {
        const std::string questions_path = config.resolved_questions_path();
        auto questions =
            load_questions_required(questions_path, "run extract-questions before bt-stage2");
        auto scores = btclass::score_confidence(stage1, questions);
        try {
            mined = btclass::mine_irrelevant(scores, config.bt.k_irrelevant);
        } catch (const input_error& e) {
            throw exit_error(kExitBadDataset, e.what());
        }
        inputs.emplace_back("questions.jsonl", questions_path);
        log_info("cli", "mined " + std::to_string(mined.size()) +
                            " low-confidence questions as the extra class");
    }

    std::vector<btclass::BTExample> augmented;
    if (config.bt.augment_target > 0) {
        std::shared_ptr<teacher::LlmBackend> inner;
        if (std::getenv("LLM_API_KEY") != nullptr)
            inner = std::make_shared<teacher::HttpLlmBackend>(teacher::HttpLlmConfig{});
        auto backend =
            std::make_shared<teacher::ReplayBackend>(config.resolved_llm_cache_dir(), inner);
        teacher::TeacherConfig teacher_config;
        teacher_config.model = config.bt.llm_model;
        teacher::Teacher generator(backend, teacher_config);
        auto full = btclass::augment_dataset(splits.train, generator, config.bt.augment_target,
                                             config.seed);
        augmented.assign(full.begin() + static_cast<std::ptrdiff_t>(splits.train.size()),
                         full.end());
        log_info("cli", "generated " + std::to_string(augmented.size()) + " training questions");
    }

    btclass::Stage2Result result =
        btclass::train_stage2(splits.train, splits.val, augmented, mined, config.bt.train);

    const std::string dir = config.resolved_stage2_dir();
    btclass::save_bt_model(dir, result.model);
    nn::write_train_log_csv(result.model.training.log, dir + "/train_log.csv");
    btclass::save_bt_examples(result.irrelevant_test, dir + "/irrelevant_test.jsonl");

    std::vector<btclass::BTExample> test = splits.test;
    test.insert(test.end(), result.irrelevant_test.begin(), result.irrelevant_test.end());
    save_model_reports(btclass::evaluate_bt(result.model, test), dir);
    write_manifest(dir, "train bt-stage2", config_hash(config), inputs);
    log_info("cli", "stage-2: " + summarize_training(result.model.training) + " -> " + dir);
    return 0;
}

}  // namespace

int cmd_train(const std::string& model, const PipelineConfig& config) {
    if (model == "qdetect") return train_qdetect(config);
    if (model == "bt-stage1") return train_bt_stage1(config);
    if (model == "bt-stage2") return train_bt_stage2(config);
    throw config_error("unknown model \"" + model + "\"; expected qdetect, bt-stage1, or bt-stage2");
}

int cmd_classify(const PipelineConfig& config) {
    const std::string stage2_dir = config.resolved_stage2_dir();
    const std::string stage1_dir = config.resolved_stage1_dir();
    std::string model_dir;
    if (fs::exists(stage2_dir + "/config.json"))
        model_dir = stage2_dir;
    else if (fs::exists(stage1_dir + "/config.json"))
        model_dir = stage1_dir;
    else
        throw exit_error(kExitMissingModel,
                         "no trained model at " + stage2_dir + " or " + stage1_dir);
    btclass::BTModel model = load_bt_model_required(model_dir);

    const std::string questions_path = config.resolved_questions_path();
    auto questions = load_questions_required(questions_path, "run extract-questions first");
    btclass::classify_bt(model, questions);

    const std::string dir = config.labeled_dir();
    fs::create_directories(dir);
    corpus::save_questions(questions, config.resolved_labeled_path());

    std::vector<std::pair<std::string, std::string>> inputs{
        {"questions.jsonl", questions_path}};
    for (const auto& [label, path] : model_input_files(model_dir)) inputs.emplace_back(label, path);
    write_manifest(dir, "classify", config_hash(config), inputs);
    log_info("cli", "labeled " + std::to_string(questions.size()) + " questions with " +
                        model_dir + " -> " + config.resolved_labeled_path());
    return 0;
}

namespace {

std::pair<std::vector<std::string>, std::vector<std::vector<int64_t>>> parse_confusion_csv(
    const std::string& path) {
    auto rows = csv::read_file(path);
    if (rows.size() < 2 || rows[0].size() < 2)
        throw input_error("not a confusion matrix: " + path);
    std::vector<std::string> names(rows[0].begin() + 1, rows[0].end());
    std::vector<std::vector<int64_t>> counts;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != names.size() + 1)
            throw input_error("ragged confusion matrix: " + path);
        std::vector<int64_t> row;
        for (size_t c = 1; c < rows[r].size(); ++c) row.push_back(std::stoll(rows[r][c]));
        counts.push_back(std::move(row));
    }
    if (counts.size() != names.size()) throw input_error("not square: " + path);
    return {std::move(names), std::move(counts)};
}

}  // namespace

int cmd_analyze(const PipelineConfig& config) {
    const std::string labeled_path = config.resolved_labeled_path();
    if (!fs::exists(labeled_path))
        throw exit_error(kExitMissingLabels,
                         "no labeled questions at " + labeled_path + "; run classify first");
    auto questions = corpus::load_questions(labeled_path);
    for (const corpus::QuestionRecord& question : questions)
        if (!question.bt_label)
            throw exit_error(kExitMissingLabels,
                             "question " + question.question_id + " has no cognitive label");

    const std::string corpus_dir = config.resolved_corpus_dir();
    auto videos = load_videos_checked(corpus_dir);
    PreparedComments prepared = prepare_comments(load_comments_checked(corpus_dir), config.filters);

    // The flag decides whether mined-class questions join the verb and engagement views.
    std::vector<corpus::QuestionRecord> core;
    for (const corpus::QuestionRecord& question : questions)
        if (config.analysis.include_irrelevant ||
            *question.bt_label != btclass::BTLevel::irrelevant)
            core.push_back(question);

    const std::string dir = config.analysis_dir();
    fs::create_directories(dir);

    corpus::Corpus working;
    working.videos = videos;
    working.comments = prepared.kept;
    working.questions = questions;
    corpus::write_stats_csv(corpus::corpus_stats(working), dir + "/corpus_stats.csv");

    auto tagger = analysis::make_rule_tagger();
    auto entries = analysis::pmi_table(analysis::build_occurrences(core, *tagger),
                                       config.analysis.min_freq);
    analysis::write_pmi_csv(entries, dir + "/pmi_verbs.csv");

    {
        auto top = analysis::top_verbs(entries, config.analysis.top_n);
        csv::Writer writer(dir + "/top_verbs.csv");
        writer.write_row({"bt_class", "rank", "lemma"});
        for (const auto& [level, lemmas] : top)
            for (size_t i = 0; i < lemmas.size(); ++i)
                writer.write_row({btclass::bt_level_name(level), std::to_string(i + 1), lemmas[i]});
        writer.close();
    }

    auto distribution = analysis::bt_distribution(questions, config.analysis.include_irrelevant);
    analysis::write_distribution_csv(distribution, dir + "/bt_distribution.csv");
    write_distribution_figure(distribution, dir + "/fig_distribution.svg");

    auto engagement = analysis::engagement_rates(core, prepared.kept, videos);
    analysis::write_engagement_csv(engagement, dir + "/engagement.csv");
    write_engagement_figure(engagement, dir + "/fig_engagement.svg");

    std::vector<std::pair<std::string, std::string>> inputs{
        {"questions.jsonl", labeled_path},
        {"videos.jsonl", corpus_dir + "/videos.jsonl"},
        {"comments.jsonl", corpus_dir + "/comments.jsonl"}};

    std::string confusion_csv = config.analysis.confusion_csv;
    if (confusion_csv.empty()) {
        for (const std::string& candidate :
             {config.resolved_stage2_dir() + "/confusion.csv",
              config.resolved_stage1_dir() + "/confusion.csv",
              config.resolved_qdetect_dir() + "/confusion.csv"}) {
            if (fs::exists(candidate)) {
                confusion_csv = candidate;
                break;
            }
        }
    }
    if (!confusion_csv.empty() && fs::exists(confusion_csv)) {
        auto [names, counts] = parse_confusion_csv(confusion_csv);
        write_confusion_figure(names, counts, dir + "/fig_confusion.svg");
        inputs.emplace_back("confusion.csv", confusion_csv);
    } else {
        log_warn("cli", "no confusion matrix found; skipping fig_confusion.svg");
    }

    write_manifest(dir, "analyze", config_hash(config), inputs);
    log_info("cli", "wrote analysis for " + std::to_string(questions.size()) + " questions -> " +
                        dir);
    return 0;
}

namespace {

std::string markdown_table(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return "_empty table_\n";
    std::ostringstream out;
    for (size_t r = 0; r < rows.size(); ++r) {
        out << "|";
        for (const std::string& field : rows[r]) out << " " << field << " |";
        out << "\n";
        if (r == 0) {
            out << "|";
            for (size_t c = 0; c < rows[0].size(); ++c) out << " --- |";
            out << "\n";
        }
    }
    return out.str();
}

void append_csv_section(std::ostringstream& out, const std::string& title,
                        const std::string& path) {
    out << "## " << title << "\n\n";
    if (fs::exists(path))
        out << markdown_table(csv::read_file(path)) << "\n";
    else
        out << "_not available; run the analyze command first_\n\n";
}

}  // namespace

int cmd_report(const PipelineConfig& config) {
    const std::string adir = config.analysis_dir();
    const std::string dir = config.report_dir();
    fs::create_directories(dir);

    std::ostringstream out;
    out << "# Question mining report\n\n";
    out << "- tool version: " << kToolVersion << "\n";
    out << "- config hash: `" << config_hash(config) << "`\n";
    out << "- output root: `" << config.output_dir << "`\n\n";

    append_csv_section(out, "Corpus overview", adir + "/corpus_stats.csv");
    append_csv_section(out, "Cognitive-level distribution", adir + "/bt_distribution.csv");
    append_csv_section(out, "Characteristic verbs", adir + "/top_verbs.csv");
    append_csv_section(out, "Engagement by cognitive level", adir + "/engagement.csv");

    out << "## Figures\n\n";
    std::vector<std::pair<std::string, std::string>> inputs;
    for (const char* name : {"fig_distribution.svg", "fig_engagement.svg", "fig_confusion.svg"}) {
        if (fs::exists(adir + "/" + name))
            out << "- [" << name << "](../analysis/" << name << ")\n";
        else
            out << "- " << name << ": _not available_\n";
    }
    out << "\n";

    out << "## Model evaluations\n\n";
    const std::vector<std::pair<std::string, std::string>> model_dirs{
        {"Interrogative detector", config.resolved_qdetect_dir()},
        {"Stage-1 level classifier", config.resolved_stage1_dir()},
        {"Stage-2 level classifier", config.resolved_stage2_dir()}};
    for (const auto& [title, mdir] : model_dirs) {
        out << "### " << title << "\n\n";
        if (fs::exists(mdir + "/metrics.csv"))
            out << markdown_table(csv::read_file(mdir + "/metrics.csv")) << "\n";
        else
            out << "_no trained model at `" << mdir << "`_\n\n";
    }

    for (const char* name : {"corpus_stats.csv", "bt_distribution.csv", "top_verbs.csv",
                             "engagement.csv", "pmi_verbs.csv"}) {
        const std::string path = adir + "/" + name;
        if (fs::exists(path)) inputs.emplace_back(name, path);
    }

    const std::string report_path = dir + "/report.md";
    std::ofstream file(report_path, std::ios::binary);
    if (!file) throw io_error("cannot write report: " + report_path);
    file << out.str();
    if (!file) throw io_error("write failed: " + report_path);

    write_manifest(dir, "report", config_hash(config), inputs);
    log_info("cli", "wrote " + report_path);
    return 0;
}

}  // namespace qmine::cli
