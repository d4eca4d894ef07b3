#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qmine/corpus/io.hpp"
#include "qmine/corpus/types.hpp"
#include "testing.hpp"
#include <json.hpp>

using namespace qmine;
using testing_support::TempDir;
using testing_support::fixture_path;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args, const std::string& log_path) {
    std::string command = std::string(QMINE_BIN) + " " + args + " >" + log_path + " 2>&1";
    int status = std::system(command.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void stage_corpus(const std::string& out_dir) {
    fs::create_directories(out_dir + "/corpus");
    fs::copy_file(fixture_path("corpus/videos.jsonl"), out_dir + "/corpus/videos.jsonl",
                  fs::copy_options::overwrite_existing);
    fs::copy_file(fixture_path("corpus/comments.jsonl"), out_dir + "/corpus/comments.jsonl",
                  fs::copy_options::overwrite_existing);
}

std::string fast_bt_config(TempDir& tmp) {
    json root = {
        {"seed", 7},
        {"filters", {{"comments_per_video_cap", 10}}},
        {"bt",
         {{"dataset", fixture_path("bt/bt60.jsonl")},
          {"k_irrelevant", 0},
          {"train",
           {{"learning_rate", 0.05},
            {"batch_size", 8},
            {"max_sequence_length", 24},
            {"dropout", 0.0},
            {"epochs", 2},
            {"patience", 4},
            {"encoder_checkpoint", "bow-tiny"},
            {"vocab_size", 400}}}}},
    };
    std::string path = tmp.file("config.json");
    testing_support::write_text(path, root.dump(2));
    return path;
}

json read_manifest_json(const std::string& dir) {
    return json::parse(testing_support::read_text(dir + "/manifest.json"));
}

}  // namespace

TEST_CASE("version and help run clean") {
    TempDir tmp;
    CHECK(run_cli("--version", tmp.file("v.log")) == 0);
    CHECK(testing_support::read_text(tmp.file("v.log")).find("0.1.0") != std::string::npos);
    CHECK(run_cli("--help", tmp.file("h.log")) == 0);
    CHECK(testing_support::read_text(tmp.file("h.log")).find("extract-questions") !=
          std::string::npos);
}

TEST_CASE("a command is required and bad flags fail parsing") {
    TempDir tmp;
    CHECK(run_cli("", tmp.file("none.log")) != 0);
    CHECK(run_cli("extract-questions --detector nonsense", tmp.file("bad.log")) != 0);
}

TEST_CASE("the rule detector extracts the expected question set") {
    TempDir tmp;
    std::string out = tmp.file("out");
    stage_corpus(out);
    REQUIRE(run_cli("--output-dir " + out + " extract-questions --detector rule",
                    tmp.file("x.log")) == 0);

    auto questions = corpus::load_questions(out + "/questions/questions.jsonl");
    auto expected =
        json::parse(testing_support::read_text(fixture_path("expected/questions_rule.json")));
    REQUIRE(questions.size() == expected.size());
    for (size_t i = 0; i < questions.size(); ++i) {
        const json& want = expected[i];
        CHECK(questions[i].question_id == want.at("question_id").get<std::string>());
        CHECK(questions[i].comment_id == want.at("comment_id").get<std::string>());
        CHECK(questions[i].video_id == want.at("video_id").get<std::string>());
        CHECK(corpus::subject_name(questions[i].subject) ==
              want.at("subject").get<std::string>());
        CHECK(questions[i].text == want.at("text").get<std::string>());
        CHECK(questions[i].detection_prob == want.at("detection_prob").get<double>());
        CHECK(questions[i].token_count == want.at("token_count").get<int>());
    }
}

TEST_CASE("rerunning a command reproduces the manifest identity") {
    TempDir tmp;
    std::string out = tmp.file("out");
    stage_corpus(out);
    REQUIRE(run_cli("--output-dir " + out + " extract-questions --detector rule",
                    tmp.file("a.log")) == 0);
    json first = read_manifest_json(out + "/questions");
    CHECK(first.at("command").get<std::string>() == "extract-questions");
    CHECK(first.at("identity_hash").get<std::string>().size() == 64);

    REQUIRE(run_cli("--output-dir " + out + " extract-questions --detector rule",
                    tmp.file("b.log")) == 0);
    json second = read_manifest_json(out + "/questions");
    CHECK(second.at("identity_hash") == first.at("identity_hash"));
    CHECK(second.at("config_hash") == first.at("config_hash"));
    CHECK(second.at("input_hashes") == first.at("input_hashes"));

    // a different detector threshold changes the configuration identity
    REQUIRE(run_cli("--output-dir " + out + " extract-questions --detector rule --threshold 0.7",
                    tmp.file("c.log")) == 0);
    json third = read_manifest_json(out + "/questions");
    CHECK(third.at("identity_hash") != first.at("identity_hash"));
}

TEST_CASE("missing inputs map to the documented exit codes") {
    TempDir tmp;
    std::string out = tmp.file("out");

    // no corpus at all: generic failure
    CHECK(run_cli("--output-dir " + out + " extract-questions --detector rule",
                  tmp.file("nocorpus.log")) == 1);

    // no trained classifier: dedicated exit code
    CHECK(run_cli("--output-dir " + out + " classify", tmp.file("nomodel.log")) == 3);
    CHECK(run_cli("--output-dir " + out + " train bt-stage2 --dataset " +
                      fixture_path("bt/bt60.jsonl"),
                  tmp.file("nostage1.log")) == 3);

    // no labeled questions: analyze refuses
    stage_corpus(out);
    CHECK(run_cli("--output-dir " + out + " analyze", tmp.file("nolabels.log")) == 5);
}

TEST_CASE("the corpus pipeline runs end to end") {
    TempDir tmp;
    std::string out = tmp.file("out");
    std::string config = fast_bt_config(tmp);
    stage_corpus(out);
    std::string base = "--config " + config + " --output-dir " + out + " ";

    REQUIRE(run_cli(base + "extract-questions --detector rule", tmp.file("1.log")) == 0);
    REQUIRE(run_cli(base + "train bt-stage1", tmp.file("2.log")) == 0);
    CHECK(fs::exists(out + "/models/bt_stage1/weights.bin"));
    CHECK(fs::exists(out + "/models/bt_stage1/metrics.csv"));
    CHECK(fs::exists(out + "/models/bt_stage1/train_log.csv"));

    REQUIRE(run_cli(base + "classify", tmp.file("3.log")) == 0);
    auto labeled = corpus::load_questions(out + "/labeled/questions.jsonl");
    REQUIRE(!labeled.empty());
    for (const auto& question : labeled) {
        CHECK(question.bt_label.has_value());
        CHECK(question.bt_probs.has_value());
    }

    REQUIRE(run_cli(base + "analyze", tmp.file("4.log")) == 0);
    for (const char* name : {"corpus_stats.csv", "bt_distribution.csv", "pmi_verbs.csv",
                             "top_verbs.csv", "engagement.csv", "fig_distribution.svg",
                             "fig_engagement.svg"})
        CHECK(fs::exists(out + "/analysis/" + std::string(name)));

    REQUIRE(run_cli(base + "report", tmp.file("5.log")) == 0);
    std::string report = testing_support::read_text(out + "/report/report.md");
    CHECK(report.find("Cognitive-level distribution") != std::string::npos);
    CHECK(report.find("biology") != std::string::npos);

    // classify with a staged model but no questions file
    std::string bare = tmp.file("bare");
    fs::create_directories(bare + "/models");
    fs::copy(out + "/models/bt_stage1", bare + "/models/bt_stage1",
             fs::copy_options::recursive);
    CHECK(run_cli("--output-dir " + bare + " classify", tmp.file("6.log")) == 4);
}

TEST_CASE("an unreadable config file fails fast") {
    TempDir tmp;
    CHECK(run_cli("--config " + tmp.file("absent.json") + " report", tmp.file("cfg.log")) == 1);
    testing_support::write_text(tmp.file("broken.json"), "{not json");
    CHECK(run_cli("--config " + tmp.file("broken.json") + " report", tmp.file("cfg2.log")) == 1);
}
