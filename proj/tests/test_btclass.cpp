#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qmine/btclass/bt.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"
#include "qmine/corpus/io.hpp"
#include "qmine/nn/model_io.hpp"
#include "qmine/teacher/llm_client.hpp"
#include "testing.hpp"
#include <json.hpp>

using namespace qmine;
using namespace qmine::btclass;
using testing_support::TempDir;
using testing_support::fixture_path;

namespace {

nn::TrainConfig fast_train_config() {
    nn::TrainConfig tcfg;
    tcfg.learning_rate = 0.05;
    tcfg.batch_size = 8;
    tcfg.max_sequence_length = 24;
    tcfg.dropout = 0.0f;
    tcfg.epochs = 8;
    tcfg.patience = 8;
    tcfg.seed = 17;
    tcfg.encoder_checkpoint = "bow-tiny";
    tcfg.vocab_size = 400;
    return tcfg;
}

std::map<BTLevel, size_t> label_counts(const std::vector<BTExample>& examples) {
    std::map<BTLevel, size_t> counts;
    for (const BTExample& example : examples) ++counts[example.label];
    return counts;
}

}  // namespace

TEST_CASE("origin and level names round trip") {
    for (ExampleOrigin origin : {ExampleOrigin::dasqbt, ExampleOrigin::augmented,
                                 ExampleOrigin::mined_irrelevant, ExampleOrigin::human})
        CHECK(parse_origin(origin_name(origin)) == origin);
    CHECK_THROWS_AS(parse_origin("synthetic"), input_error);

    for (BTLevel level : all_bt_levels) CHECK(parse_bt_level(bt_level_name(level)) == level);
    CHECK(std::string(bt_level_name(BTLevel::evaluation)) == "Evaluation");
    CHECK_THROWS_AS(parse_bt_level("Remembering"), input_error);
}

TEST_CASE("bt examples round trip through jsonl") {
    TempDir tmp;
    std::vector<BTExample> examples = {
        {"Define osmosis?", BTLevel::knowledge, ExampleOrigin::dasqbt},
        {"How would you design a study?", BTLevel::synthesis, ExampleOrigin::augmented},
        {"first", BTLevel::irrelevant, ExampleOrigin::mined_irrelevant},
    };
    save_bt_examples(examples, tmp.file("bt.jsonl"));
    auto loaded = load_bt_examples(tmp.file("bt.jsonl"));
    REQUIRE(loaded.size() == 3);
    for (size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].text == examples[i].text);
        CHECK(loaded[i].label == examples[i].label);
        CHECK(loaded[i].origin == examples[i].origin);
    }
}

TEST_CASE("bt example loader defaults origin and rejects bad labels") {
    TempDir tmp;
    testing_support::write_text(tmp.file("no_origin.jsonl"),
                                "{\"text\":\"a?\",\"label\":\"Analysis\"}\n");
    auto loaded = load_bt_examples(tmp.file("no_origin.jsonl"));
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].origin == ExampleOrigin::dasqbt);

    testing_support::write_text(tmp.file("bad_label.jsonl"),
                                "{\"text\":\"a?\",\"label\":\"Remember\"}\n");
    CHECK_THROWS_AS(load_bt_examples(tmp.file("bad_label.jsonl")), dataset_error);
}

TEST_CASE("bt60 fixture loads with ten examples per level") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    REQUIRE(examples.size() == 60);
    auto counts = label_counts(examples);
    CHECK(counts.size() == 6);
    for (BTLevel level : six_bt_levels) CHECK(counts[level] == 10);
    for (const BTExample& example : examples) CHECK(example.origin == ExampleOrigin::dasqbt);
}

TEST_CASE("split_dataset validates its inputs") {
    std::vector<BTExample> examples = {{"a?", BTLevel::knowledge, ExampleOrigin::dasqbt},
                                       {"b?", BTLevel::knowledge, ExampleOrigin::dasqbt}};
    CHECK_THROWS_AS(split_dataset({}, 0.8, 0), input_error);
    CHECK_THROWS_AS(split_dataset(examples, 0.0, 0), config_error);
    CHECK_THROWS_AS(split_dataset(examples, 1.0, 0), config_error);

    examples.push_back({"c?", BTLevel::analysis, ExampleOrigin::augmented});
    CHECK_THROWS_AS(split_dataset(examples, 0.8, 0), input_error);
}

TEST_CASE("split_dataset is stratified and deterministic") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    CHECK(split.train.size() == 48);
    CHECK(split.test.size() == 12);
    auto train_counts = label_counts(split.train);
    auto test_counts = label_counts(split.test);
    for (BTLevel level : six_bt_levels) {
        CHECK(train_counts[level] == 8);
        CHECK(test_counts[level] == 2);
    }

    // the two halves partition the input
    std::multiset<std::string> texts;
    for (const BTExample& example : examples) texts.insert(example.text);
    std::multiset<std::string> halves;
    for (const BTExample& example : split.train) halves.insert(example.text);
    for (const BTExample& example : split.test) halves.insert(example.text);
    CHECK(halves == texts);

    auto again = split_dataset(examples, 0.8, 5);
    REQUIRE(again.train.size() == split.train.size());
    for (size_t i = 0; i < again.train.size(); ++i)
        CHECK(again.train[i].text == split.train[i].text);
    for (size_t i = 0; i < again.test.size(); ++i)
        CHECK(again.test[i].text == split.test[i].text);

    auto other = split_dataset(examples, 0.8, 6);
    bool differs = false;
    for (size_t i = 0; i < other.test.size(); ++i)
        if (other.test[i].text != split.test[i].text) differs = true;
    CHECK(differs);
}

TEST_CASE("split_dataset falls back to a global split for singleton classes") {
    std::vector<BTExample> examples;
    examples.push_back({"only one", BTLevel::knowledge, ExampleOrigin::dasqbt});
    for (int i = 0; i < 4; ++i)
        examples.push_back({"c" + std::to_string(i), BTLevel::comprehension,
                            ExampleOrigin::dasqbt});
    for (int i = 0; i < 4; ++i)
        examples.push_back({"a" + std::to_string(i), BTLevel::analysis, ExampleOrigin::dasqbt});

    set_log_level(LogLevel::silent);
    reset_warning_count();
    auto split = split_dataset(examples, 0.8, 3);
    CHECK(warning_count() == 1);
    // 9 examples cut globally: round(7.2) = 7 train, 2 test
    CHECK(split.train.size() == 7);
    CHECK(split.test.size() == 2);
}

TEST_CASE("mine_irrelevant matches a brute-force stable sort") {
    std::mt19937 rng(404);
    std::vector<ConfidenceScore> scores;
    const double levels[] = {0.1, 0.2, 0.2, 0.3, 0.5, 0.9};
    for (int i = 0; i < 200; ++i) {
        ConfidenceScore score;
        char buf[16];
        std::snprintf(buf, sizeof buf, "q%03d", i);
        score.question_id = buf;
        score.max_class_prob = levels[rng() % 6];
        score.predicted = six_bt_levels[rng() % 6];
        score.text = "text " + std::to_string(i);
        scores.push_back(score);
    }
    std::shuffle(scores.begin(), scores.end(), rng);

    auto expected = scores;
    std::sort(expected.begin(), expected.end(),
              [](const ConfidenceScore& a, const ConfidenceScore& b) {
                  if (a.max_class_prob != b.max_class_prob)
                      return a.max_class_prob < b.max_class_prob;
                  return a.question_id < b.question_id;
              });

    const size_t k = 60;
    auto mined = mine_irrelevant(scores, k);
    REQUIRE(mined.size() == k);
    for (size_t i = 0; i < k; ++i) {
        CHECK(mined[i].text == expected[i].text);
        CHECK(mined[i].label == BTLevel::irrelevant);
        CHECK(mined[i].origin == ExampleOrigin::mined_irrelevant);
    }

    CHECK(mine_irrelevant(scores, scores.size()).size() == scores.size());
    CHECK(mine_irrelevant(scores, 0).empty());
    CHECK_THROWS_AS(mine_irrelevant(scores, scores.size() + 1), input_error);
}

TEST_CASE("train_bt fits the template dataset and records a fingerprint") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    auto model = train_bt(split.train, split.test, fast_train_config(), 6);

    CHECK(model.classes.size() == 6);
    CHECK(model.model.class_names.front() == "Knowledge");
    CHECK(model.model.class_names.back() == "Synthesis");
    CHECK(model.model.fingerprint.seed == 17);
    CHECK(model.model.fingerprint.dataset_sha256.size() == 64);
    CHECK(model.training.best_val_f1 > 0.9);

    auto report = evaluate_bt(model, split.test);
    CHECK(report.total == split.test.size());
    CHECK(report.macro.f1 > 0.9);
}

TEST_CASE("train_bt validates labels against the class set") {
    std::vector<BTExample> train = {{"a?", BTLevel::knowledge, ExampleOrigin::dasqbt},
                                    {"b?", BTLevel::irrelevant, ExampleOrigin::mined_irrelevant}};
    std::vector<BTExample> val = {{"c?", BTLevel::knowledge, ExampleOrigin::dasqbt}};
    CHECK_THROWS_AS(train_bt(train, val, fast_train_config(), 6), dataset_error);
    CHECK_THROWS_AS(train_bt({}, val, fast_train_config(), 6), input_error);
    CHECK_THROWS_AS(train_bt(train, val, fast_train_config(), 5), config_error);

    std::vector<BTExample> bad_val = {{"d?", BTLevel::irrelevant, ExampleOrigin::dasqbt}};
    std::vector<BTExample> ok_train = {{"a?", BTLevel::knowledge, ExampleOrigin::dasqbt},
                                       {"b?", BTLevel::analysis, ExampleOrigin::dasqbt}};
    CHECK_THROWS_AS(train_bt(ok_train, bad_val, fast_train_config(), 6), dataset_error);
}

TEST_CASE("train_bt warns when a class has no training data") {
    std::vector<BTExample> train;
    for (BTLevel level : {BTLevel::knowledge, BTLevel::comprehension, BTLevel::application,
                          BTLevel::analysis, BTLevel::evaluation})
        for (int i = 0; i < 3; ++i)
            train.push_back({std::string(bt_level_name(level)) + " " + std::to_string(i) + "?",
                             level, ExampleOrigin::dasqbt});
    std::vector<BTExample> val = {train[0]};

    nn::TrainConfig tcfg = fast_train_config();
    tcfg.epochs = 1;
    set_log_level(LogLevel::silent);
    reset_warning_count();
    auto model = train_bt(train, val, tcfg, 6);
    CHECK(warning_count() >= 1);  // Synthesis absent
    CHECK(model.classes.size() == 6);
}

TEST_CASE("score_confidence reports the argmax probability per question") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    auto model = train_bt(split.train, split.test, fast_train_config(), 6);

    auto questions = corpus::load_questions(fixture_path("bt/questions200.jsonl"));
    questions.resize(40);
    auto scores = score_confidence(model, questions);
    REQUIRE(scores.size() == questions.size());

    auto records = questions;
    auto predictions = classify_bt(model, records);
    for (size_t i = 0; i < scores.size(); ++i) {
        CHECK(scores[i].question_id == questions[i].question_id);
        CHECK(scores[i].text == questions[i].text);
        CHECK(scores[i].max_class_prob > 0.0);
        CHECK(scores[i].max_class_prob <= 1.0);
        double top = *std::max_element(predictions[i].probs.begin(),
                                       predictions[i].probs.end());
        CHECK(scores[i].max_class_prob == doctest::Approx(top).epsilon(1e-12));
        CHECK(scores[i].predicted == predictions[i].label);
    }
}

TEST_CASE("score_confidence rejects a seven-class model") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    std::vector<BTExample> irrelevant;
    for (int i = 0; i < 10; ++i)
        irrelevant.push_back({"noise " + std::to_string(i), BTLevel::irrelevant,
                              ExampleOrigin::mined_irrelevant});
    nn::TrainConfig tcfg = fast_train_config();
    tcfg.epochs = 1;
    auto stage2 = train_stage2(split.train, split.test, {}, irrelevant, tcfg);
    auto questions = corpus::load_questions(fixture_path("bt/questions200.jsonl"));
    questions.resize(4);
    CHECK_THROWS_AS(score_confidence(stage2.model, questions), input_error);
}

TEST_CASE("classify_bt stores labels and probability vectors on the records") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    auto model = train_bt(split.train, split.test, fast_train_config(), 6);

    auto questions = corpus::load_questions(fixture_path("bt/questions200.jsonl"));
    questions.resize(70);  // crosses the internal batch boundary
    auto predictions = classify_bt(model, questions);
    REQUIRE(predictions.size() == questions.size());
    for (size_t i = 0; i < questions.size(); ++i) {
        REQUIRE(questions[i].bt_label.has_value());
        CHECK(*questions[i].bt_label == predictions[i].label);
        REQUIRE(questions[i].bt_probs.has_value());
        REQUIRE(questions[i].bt_probs->size() == 6);
        double sum = 0.0;
        for (double p : *questions[i].bt_probs) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        size_t argmax = static_cast<size_t>(
            std::max_element(predictions[i].probs.begin(), predictions[i].probs.end()) -
            predictions[i].probs.begin());
        CHECK(model.classes[argmax] == predictions[i].label);
    }
}

TEST_CASE("train_stage2 without extra data is exactly stage-1 training") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    nn::TrainConfig tcfg = fast_train_config();
    tcfg.epochs = 3;

    auto stage1 = train_bt(split.train, split.test, tcfg, 6);
    auto stage2 = train_stage2(split.train, split.test, {}, {}, tcfg);

    CHECK(stage2.irrelevant_test.empty());
    CHECK(stage2.model.classes.size() == 6);
    REQUIRE(stage2.model.training.best_weights.size() ==
            stage1.training.best_weights.size());
    for (size_t i = 0; i < stage1.training.best_weights.size(); ++i)
        CHECK(stage2.model.training.best_weights[i] == stage1.training.best_weights[i]);
    CHECK(stage2.model.training.best_val_f1 == stage1.training.best_val_f1);
}

TEST_CASE("train_stage2 holds out a fifth of the mined class") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    std::vector<BTExample> irrelevant;
    std::set<std::string> mined_texts;
    for (int i = 0; i < 10; ++i) {
        std::string text = "thanks for uploading video " + std::to_string(i);
        irrelevant.push_back({text, BTLevel::irrelevant, ExampleOrigin::mined_irrelevant});
        mined_texts.insert(text);
    }
    std::vector<BTExample> augmented = {
        {"How would you design a new enzyme assay?", BTLevel::synthesis,
         ExampleOrigin::augmented}};

    nn::TrainConfig tcfg = fast_train_config();
    tcfg.epochs = 2;
    auto result = train_stage2(split.train, split.test, augmented, irrelevant, tcfg);

    CHECK(result.model.classes.size() == 7);
    CHECK(result.model.model.class_names.back() == "Irrelevant");
    REQUIRE(result.irrelevant_test.size() == 2);  // round(0.2 * 10)
    for (const BTExample& example : result.irrelevant_test) {
        CHECK(example.label == BTLevel::irrelevant);
        CHECK(mined_texts.count(example.text) == 1);
    }

    auto again = train_stage2(split.train, split.test, augmented, irrelevant, tcfg);
    REQUIRE(again.irrelevant_test.size() == result.irrelevant_test.size());
    for (size_t i = 0; i < again.irrelevant_test.size(); ++i)
        CHECK(again.irrelevant_test[i].text == result.irrelevant_test[i].text);
}

TEST_CASE("train_stage2 rejects mislabeled inputs") {
    std::vector<BTExample> base = {{"a?", BTLevel::knowledge, ExampleOrigin::dasqbt},
                                   {"b?", BTLevel::analysis, ExampleOrigin::dasqbt}};
    std::vector<BTExample> val = {base[0]};
    std::vector<BTExample> bad_augmented = {
        {"x", BTLevel::irrelevant, ExampleOrigin::augmented}};
    std::vector<BTExample> bad_mined = {
        {"y?", BTLevel::knowledge, ExampleOrigin::mined_irrelevant}};
    nn::TrainConfig tcfg = fast_train_config();
    CHECK_THROWS_AS(train_stage2(base, val, bad_augmented, {}, tcfg), dataset_error);
    CHECK_THROWS_AS(train_stage2(base, val, {}, bad_mined, tcfg), dataset_error);
}

TEST_CASE("augment_dataset cycles levels and tolerates generation failures") {
    using teacher::ChatRequest;
    using teacher::ChatResponse;
    using teacher::ScriptedBackend;
    auto backend = std::make_shared<ScriptedBackend>([](const ChatRequest& request) {
        ChatResponse response;
        response.content = "Generated: " + request.messages.back().content;
        return response;
    });
    teacher::Teacher generator(backend);

    std::vector<BTExample> base = {{"seed?", BTLevel::knowledge, ExampleOrigin::dasqbt}};
    auto grown = augment_dataset(base, generator, 5, 9);
    REQUIRE(grown.size() == 5);
    CHECK(grown[0].origin == ExampleOrigin::dasqbt);
    CHECK(grown[1].label == BTLevel::knowledge);
    CHECK(grown[2].label == BTLevel::comprehension);
    CHECK(grown[3].label == BTLevel::application);
    CHECK(grown[4].label == BTLevel::analysis);
    for (size_t i = 1; i < grown.size(); ++i) {
        CHECK(grown[i].origin == ExampleOrigin::augmented);
        CHECK(grown[i].text.rfind("Generated:", 0) == 0);
    }

    CHECK(augment_dataset(base, generator, 1, 9).size() == 1);  // already large enough

    auto broken = std::make_shared<ScriptedBackend>([](const ChatRequest&) {
        return ChatResponse{};  // always empty -> generation_error after retries
    });
    teacher::Teacher failing(broken);
    set_log_level(LogLevel::silent);
    reset_warning_count();
    auto partial = augment_dataset(base, failing, 3, 9);
    CHECK(partial.size() == 1);
    CHECK(warning_count() == 1);
}

TEST_CASE("aggregate_human_labels applies strict majority") {
    auto sample = [](std::vector<BTLevel> a) {
        return HumanSample{"q", std::move(a), std::nullopt};
    };
    CHECK(*aggregate_human_labels(sample({BTLevel::knowledge, BTLevel::knowledge,
                                          BTLevel::knowledge})) == BTLevel::knowledge);
    CHECK(*aggregate_human_labels(sample({BTLevel::knowledge, BTLevel::knowledge,
                                          BTLevel::analysis})) == BTLevel::knowledge);
    CHECK(*aggregate_human_labels(sample({BTLevel::analysis, BTLevel::knowledge,
                                          BTLevel::knowledge})) == BTLevel::knowledge);
    CHECK(*aggregate_human_labels(sample({BTLevel::knowledge, BTLevel::analysis,
                                          BTLevel::knowledge})) == BTLevel::knowledge);
    CHECK(!aggregate_human_labels(
               sample({BTLevel::knowledge, BTLevel::analysis, BTLevel::synthesis}))
               .has_value());
    CHECK_THROWS_AS(aggregate_human_labels(sample({BTLevel::knowledge, BTLevel::knowledge})),
                    input_error);
}

TEST_CASE("annotation fixture aggregates to the expected gold labels") {
    auto samples = load_human_annotations(fixture_path("annotations/human300.csv"));
    REQUIRE(samples.size() == 300);
    for (size_t i = 0; i < samples.size(); ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "hq%03zu", i);
        CHECK(samples[i].question_id == buf);
        CHECK(samples[i].annotations.size() == 3);
    }

    auto result = aggregate_all(samples);
    CHECK(result.tie_count == 12);

    auto expected = nlohmann::json::parse(
        testing_support::read_text(fixture_path("annotations/expected.json")));
    CHECK(expected.at("tie_count").get<size_t>() == result.tie_count);
    const auto& gold = expected.at("gold");
    size_t gold_count = 0;
    for (const HumanSample& sample : result.samples) {
        if (sample.gold) {
            ++gold_count;
            REQUIRE(gold.contains(sample.question_id));
            CHECK(gold.at(sample.question_id).get<std::string>() ==
                  bt_level_name(*sample.gold));
        } else {
            CHECK(!gold.contains(sample.question_id));
        }
    }
    CHECK(gold_count == expected.at("gold_count").get<size_t>());
}

TEST_CASE("annotation loader validates structure") {
    TempDir tmp;
    testing_support::write_text(tmp.file("empty.csv"), "");
    CHECK_THROWS_AS(load_human_annotations(tmp.file("empty.csv")), input_error);

    testing_support::write_text(tmp.file("header.csv"), "qid,who,label\nq1,a,Knowledge\n");
    CHECK_THROWS_AS(load_human_annotations(tmp.file("header.csv")), input_error);

    testing_support::write_text(tmp.file("short.csv"),
                                "question_id,annotator_id,label\nq1,a\n");
    CHECK_THROWS_AS(load_human_annotations(tmp.file("short.csv")), input_error);

    testing_support::write_text(tmp.file("label.csv"),
                                "question_id,annotator_id,label\nq1,a,Remembering\n");
    CHECK_THROWS_AS(load_human_annotations(tmp.file("label.csv")), input_error);

    testing_support::write_text(
        tmp.file("ok.csv"),
        "question_id,annotator_id,label\n"
        "q1,a,Knowledge\nq1,b,Knowledge\nq1,c,Analysis\n"
        "q2,a,Synthesis\nq2,b,Evaluation\nq2,c,Application\n");
    auto samples = load_human_annotations(tmp.file("ok.csv"));
    REQUIRE(samples.size() == 2);
    auto result = aggregate_all(samples);
    CHECK(result.tie_count == 1);
    CHECK(*result.samples[0].gold == BTLevel::knowledge);
    CHECK(!result.samples[1].gold.has_value());
}

TEST_CASE("evaluate_bt validates the test set") {
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    nn::TrainConfig tcfg = fast_train_config();
    tcfg.epochs = 1;
    auto model = train_bt(split.train, split.test, tcfg, 6);
    CHECK_THROWS_AS(evaluate_bt(model, {}), input_error);
    std::vector<BTExample> outside = {
        {"noise", BTLevel::irrelevant, ExampleOrigin::mined_irrelevant}};
    CHECK_THROWS_AS(evaluate_bt(model, outside), input_error);
}

TEST_CASE("bt model round trips through a directory") {
    TempDir tmp;
    auto examples = load_bt_examples(fixture_path("bt/bt60.jsonl"));
    auto split = split_dataset(examples, 0.8, 5);
    auto model = train_bt(split.train, split.test, fast_train_config(), 6);
    save_bt_model(tmp.file("model"), model);

    auto loaded = load_bt_model(tmp.file("model"));
    CHECK(loaded.classes == model.classes);
    CHECK(loaded.model.class_names == model.model.class_names);
    CHECK(loaded.model.fingerprint.dataset_sha256 == model.model.fingerprint.dataset_sha256);

    auto questions = corpus::load_questions(fixture_path("bt/questions200.jsonl"));
    questions.resize(12);
    auto before = questions;
    auto after = questions;
    auto p1 = classify_bt(model, before);
    auto p2 = classify_bt(loaded, after);
    REQUIRE(p1.size() == p2.size());
    for (size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1[i].label == p2[i].label);
        for (size_t k = 0; k < p1[i].probs.size(); ++k)
            CHECK(p1[i].probs[k] == doctest::Approx(p2[i].probs[k]).epsilon(1e-12));
    }

    CHECK_THROWS_AS(load_bt_model(tmp.file("missing")), not_found_error);
}

TEST_CASE("load_bt_model rejects a binary detector directory") {
    TempDir tmp;
    nn::EncoderConfig config = nn::preset_config("bow-tiny");
    nn::WordTokenizer tokenizer;
    tokenizer.build({"why is this here", "it just is"}, 50);
    config.vocab_size = static_cast<int>(tokenizer.size());
    config.n_classes = 2;
    nn::Encoder encoder(config, /*seed=*/1);
    nn::save_model(tmp.file("detector"), encoder, tokenizer, {"no", "yes"}, {"", 1, "0.1.0"});
    CHECK_THROWS_AS(load_bt_model(tmp.file("detector")), io_error);
}
