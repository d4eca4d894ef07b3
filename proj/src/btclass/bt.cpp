#include "qmine/btclass/bt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "qmine/common/csv.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/rng.hpp"
#include "qmine/common/sha256.hpp"
#include "qmine/nn/objectives.hpp"

namespace qmine::btclass {

using jsonl::json;

namespace {

std::vector<BTLevel> class_list(int n_classes) {
    if (n_classes != 6 && n_classes != 7)
        throw config_error("n_classes must be 6 or 7");
    std::vector<BTLevel> classes(all_bt_levels.begin(),
                                 all_bt_levels.begin() + n_classes);
    return classes;
}

std::vector<std::string> class_names(const std::vector<BTLevel>& classes) {
    std::vector<std::string> names;
    names.reserve(classes.size());
    for (BTLevel level : classes) names.push_back(bt_level_name(level));
    return names;
}

int class_index(const std::vector<BTLevel>& classes, BTLevel label) {
    for (size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == label) return static_cast<int>(i);
    return -1;
}

std::string dataset_hash(const std::vector<BTExample>& examples) {
    Sha256 hash;
    for (const BTExample& example : examples) {
        hash.update(example.text);
        hash.update("\x1f");
        hash.update(bt_level_name(example.label));
        hash.update("\n");
    }
    return hash.hex_digest();
}

// Softmax probabilities for a list of texts, chunked through the encoder.
std::vector<std::vector<double>> batch_probs(const BTModel& model,
                                             const std::vector<std::string>& texts) {
    nn::Encoder encoder = model.model.make_encoder();
    const size_t C = static_cast<size_t>(model.model.config.n_classes);
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    constexpr size_t kChunk = 64;
    std::vector<nn::EncodedExample> encoded;
    for (size_t begin = 0; begin < texts.size(); begin += kChunk) {
        size_t end = std::min(texts.size(), begin + kChunk);
        encoded.clear();
        for (size_t i = begin; i < end; ++i)
            encoded.push_back(
                {model.model.tokenizer.encode(texts[i], model.model.config.max_len)});
        std::vector<const nn::EncodedExample*> batch;
        for (const nn::EncodedExample& e : encoded) batch.push_back(&e);
        std::vector<float> logits = encoder.forward(batch, false, nullptr);
        for (size_t r = 0; r < end - begin; ++r) {
            const float* row = logits.data() + r * C;
            double m = *std::max_element(row, row + C);
            std::vector<double> probs(C);
            double sum = 0.0;
            for (size_t k = 0; k < C; ++k) {
                probs[k] = std::exp(static_cast<double>(row[k]) - m);
                sum += probs[k];
            }
            for (double& p : probs) p /= sum;
            out.push_back(std::move(probs));
        }
    }
    return out;
}

}  // namespace

const char* origin_name(ExampleOrigin origin) {
    switch (origin) {
        case ExampleOrigin::dasqbt: return "dasqbt";
        case ExampleOrigin::augmented: return "augmented";
        case ExampleOrigin::mined_irrelevant: return "mined_irrelevant";
        case ExampleOrigin::human: return "human";
    }
    throw input_error("bad origin value");
}

ExampleOrigin parse_origin(const std::string& name) {
    for (ExampleOrigin origin : {ExampleOrigin::dasqbt, ExampleOrigin::augmented,
                                 ExampleOrigin::mined_irrelevant, ExampleOrigin::human})
        if (name == origin_name(origin)) return origin;
    throw input_error("unknown origin: " + name);
}

std::vector<BTExample> load_bt_examples(const std::string& path) {
    std::vector<BTExample> examples;
    jsonl::for_each_record(path, [&](const json& record) {
        BTExample example;
        example.text = record.at("text").get<std::string>();
        example.label = parse_bt_level(record.at("label").get<std::string>());
        if (record.contains("origin"))
            example.origin = parse_origin(record.at("origin").get<std::string>());
        examples.push_back(std::move(example));
    });
    return examples;
}

void save_bt_examples(const std::vector<BTExample>& examples, const std::string& path) {
    jsonl::Writer writer(path);
    for (const BTExample& example : examples) {
        writer.write(json{{"text", example.text},
                          {"label", bt_level_name(example.label)},
                          {"origin", origin_name(example.origin)}});
    }
    writer.close();
}

SplitResult split_dataset(const std::vector<BTExample>& examples, double train_fraction,
                          uint64_t seed) {
    if (examples.empty()) throw input_error("cannot split an empty dataset");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw config_error("train_fraction must be in (0, 1)");
    for (const BTExample& example : examples)
        if (example.origin == ExampleOrigin::augmented)
            throw input_error("augmented examples are train-only; split before augmenting");

    std::array<std::vector<size_t>, 7> by_class;
    for (size_t i = 0; i < examples.size(); ++i)
        by_class[static_cast<size_t>(bt_level_index(examples[i].label))].push_back(i);

    bool stratified = true;
    for (const std::vector<size_t>& group : by_class) {
        if (group.size() == 1) {
            stratified = false;
            log_warn("btclass", "a class has fewer than 2 examples; using a global split");
            break;
        }
    }

    Rng rng = make_rng(seed);
    std::vector<size_t> train_idx, test_idx;
    auto cut = [&](std::vector<size_t>& group) {
        std::shuffle(group.begin(), group.end(), rng);
        size_t n_train = static_cast<size_t>(
            std::llround(train_fraction * static_cast<double>(group.size())));
        n_train = std::min(n_train, group.size());
        train_idx.insert(train_idx.end(), group.begin(), group.begin() + n_train);
        test_idx.insert(test_idx.end(), group.begin() + n_train, group.end());
    };
    if (stratified) {
        for (std::vector<size_t>& group : by_class)
            if (!group.empty()) cut(group);
    } else {
        std::vector<size_t> all(examples.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = i;
        cut(all);
    }

    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    SplitResult result;
    for (size_t i : train_idx) result.train.push_back(examples[i]);
    for (size_t i : test_idx) result.test.push_back(examples[i]);
    return result;
}

std::vector<BTExample> augment_dataset(const std::vector<BTExample>& base,
                                       teacher::Teacher& teacher, size_t target_total,
                                       uint64_t seed) {
    std::vector<BTExample> out = base;
    if (target_total <= out.size()) return out;
    const size_t n_needed = target_total - out.size();
    Rng rng = make_rng(seed);
    size_t failures = 0;
    for (size_t j = 0; j < n_needed; ++j) {
        BTLevel level = six_bt_levels[j % six_bt_levels.size()];
        corpus::SubjectTag subject =
            corpus::all_subjects[uniform_index(rng, corpus::all_subjects.size())];
        const std::vector<std::string>& topics = teacher::topic_pool(subject);
        const std::string& topic = topics[uniform_index(rng, topics.size())];
        try {
            teacher::GeneratedQuestion gq = teacher.generate_bt_question(level, topic, subject);
            out.push_back({gq.text, level, ExampleOrigin::augmented});
        } catch (const generation_error&) {
            ++failures;
        }
    }
    if (failures > 0)
        log_warn("btclass", std::to_string(failures) +
                                " generation failures; augmentation is partial");
    return out;
}

BTModel train_bt(const std::vector<BTExample>& train, const std::vector<BTExample>& val,
                 const nn::TrainConfig& tcfg, int n_classes) {
    tcfg.validate();
    std::vector<BTLevel> classes = class_list(n_classes);
    if (train.empty()) throw input_error("empty training set");

    std::array<size_t, 7> counts{};
    for (const BTExample& example : train) {
        int idx = class_index(classes, example.label);
        if (idx < 0)
            throw dataset_error(std::string("label outside the class set: ") +
                                bt_level_name(example.label));
        ++counts[static_cast<size_t>(idx)];
    }
    for (const BTExample& example : val)
        if (class_index(classes, example.label) < 0)
            throw dataset_error(std::string("label outside the class set: ") +
                                bt_level_name(example.label));
    for (size_t i = 0; i < classes.size(); ++i)
        if (counts[i] == 0)
            log_warn("btclass", std::string("class absent from training data: ") +
                                    bt_level_name(classes[i]));

    std::vector<std::string> texts;
    texts.reserve(train.size());
    for (const BTExample& example : train) texts.push_back(example.text);
    nn::WordTokenizer tokenizer;
    tokenizer.build(texts, static_cast<size_t>(tcfg.vocab_size));

    nn::EncoderConfig config = nn::preset_config(tcfg.encoder_checkpoint);
    config.vocab_size = static_cast<int>(tokenizer.size());
    config.max_len = tcfg.max_sequence_length;
    config.n_classes = n_classes;
    config.dropout = tcfg.dropout;

    auto encode = [&](const std::vector<BTExample>& examples) {
        std::vector<nn::TrainExample> out;
        out.reserve(examples.size());
        for (const BTExample& example : examples) {
            nn::TrainExample te;
            te.ids = tokenizer.encode(example.text, tcfg.max_sequence_length);
            te.target = class_index(classes, example.label);
            out.push_back(std::move(te));
        }
        return out;
    };

    nn::Encoder encoder(config, tcfg.seed);
    BTModel model;
    model.training = nn::train_loop(encoder, encode(train), encode(val),
                                    nn::make_ce_objective(), tcfg);
    model.classes = classes;
    model.model.config = config;
    model.model.tokenizer = std::move(tokenizer);
    model.model.weights = model.training.best_weights;
    model.model.class_names = class_names(classes);
    model.model.fingerprint = {dataset_hash(train), tcfg.seed, "0.1.0"};
    return model;
}

std::vector<ConfidenceScore> score_confidence(
    const BTModel& model, const std::vector<corpus::QuestionRecord>& questions) {
    if (model.classes.size() != 6)
        throw input_error("confidence mining expects the 6-class stage-1 model");
    std::vector<std::string> texts;
    texts.reserve(questions.size());
    for (const corpus::QuestionRecord& question : questions) texts.push_back(question.text);
    std::vector<std::vector<double>> probs = batch_probs(model, texts);
    std::vector<ConfidenceScore> scores;
    scores.reserve(questions.size());
    for (size_t i = 0; i < questions.size(); ++i) {
        size_t argmax = static_cast<size_t>(
            std::max_element(probs[i].begin(), probs[i].end()) - probs[i].begin());
        scores.push_back({questions[i].question_id, probs[i][argmax], model.classes[argmax],
                          questions[i].text});
    }
    return scores;
}

std::vector<BTExample> mine_irrelevant(const std::vector<ConfidenceScore>& scores, size_t k) {
    if (scores.size() < k)
        throw input_error("asked for " + std::to_string(k) + " items from " +
                          std::to_string(scores.size()) + " scores");
    std::vector<ConfidenceScore> sorted = scores;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ConfidenceScore& a, const ConfidenceScore& b) {
                         if (a.max_class_prob != b.max_class_prob)
                             return a.max_class_prob < b.max_class_prob;
                         return a.question_id < b.question_id;
                     });
    std::vector<BTExample> mined;
    mined.reserve(k);
    for (size_t i = 0; i < k; ++i)
        mined.push_back({sorted[i].text, BTLevel::irrelevant, ExampleOrigin::mined_irrelevant});
    return mined;
}

Stage2Result train_stage2(const std::vector<BTExample>& base_train,
                          const std::vector<BTExample>& val,
                          const std::vector<BTExample>& augmented,
                          const std::vector<BTExample>& irrelevant,
                          const nn::TrainConfig& tcfg) {
    if (augmented.empty() && irrelevant.empty()) {
        Stage2Result result;
        result.model = train_bt(base_train, val, tcfg, 6);
        return result;
    }
    for (const BTExample& example : augmented)
        if (example.label == BTLevel::irrelevant)
            throw dataset_error("augmented examples cannot be labeled Irrelevant");
    for (const BTExample& example : irrelevant)
        if (example.label != BTLevel::irrelevant)
            throw dataset_error("mined examples must be labeled Irrelevant");

    std::vector<BTExample> irr = irrelevant;
    Rng rng = make_rng(tcfg.seed, 11);
    std::shuffle(irr.begin(), irr.end(), rng);
    size_t n_train_irr =
        static_cast<size_t>(std::llround(0.8 * static_cast<double>(irr.size())));
    n_train_irr = std::min(n_train_irr, irr.size());

    Stage2Result result;
    std::vector<BTExample> train = base_train;
    train.insert(train.end(), augmented.begin(), augmented.end());
    train.insert(train.end(), irr.begin(), irr.begin() + n_train_irr);
    result.irrelevant_test.assign(irr.begin() + n_train_irr, irr.end());
    result.model = train_bt(train, val, tcfg, 7);
    return result;
}

std::vector<BTPrediction> classify_bt(const BTModel& model,
                                      std::vector<corpus::QuestionRecord>& questions) {
    std::vector<std::string> texts;
    texts.reserve(questions.size());
    for (const corpus::QuestionRecord& question : questions) texts.push_back(question.text);
    std::vector<std::vector<double>> probs = batch_probs(model, texts);
    std::vector<BTPrediction> predictions;
    predictions.reserve(questions.size());
    for (size_t i = 0; i < questions.size(); ++i) {
        size_t argmax = static_cast<size_t>(
            std::max_element(probs[i].begin(), probs[i].end()) - probs[i].begin());
        BTPrediction prediction{model.classes[argmax], probs[i]};
        questions[i].bt_label = prediction.label;
        questions[i].bt_probs = prediction.probs;
        predictions.push_back(std::move(prediction));
    }
    return predictions;
}

std::optional<BTLevel> aggregate_human_labels(const HumanSample& sample) {
    if (sample.annotations.size() != 3)
        throw input_error("expected exactly 3 annotations for " + sample.question_id);
    const std::vector<BTLevel>& a = sample.annotations;
    if (a[0] == a[1] || a[0] == a[2]) return a[0];
    if (a[1] == a[2]) return a[1];
    return std::nullopt;
}

AggregationResult aggregate_all(std::vector<HumanSample> samples) {
    AggregationResult result;
    for (HumanSample& sample : samples) {
        sample.gold = aggregate_human_labels(sample);
        if (!sample.gold) ++result.tie_count;
    }
    result.samples = std::move(samples);
    return result;
}

std::vector<HumanSample> load_human_annotations(const std::string& path) {
    std::vector<std::vector<std::string>> rows = csv::read_file(path);
    if (rows.empty()) throw input_error(path + ": empty annotation file");
    const std::vector<std::string> expected{"question_id", "annotator_id", "label"};
    if (rows[0] != expected)
        throw input_error(path + ": header must be question_id,annotator_id,label");
    std::vector<HumanSample> samples;
    std::map<std::string, size_t> by_id;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 3)
            throw input_error(path + ": row " + std::to_string(r + 1) + " has " +
                              std::to_string(rows[r].size()) + " fields");
        const std::string& question_id = rows[r][0];
        auto [it, inserted] = by_id.try_emplace(question_id, samples.size());
        if (inserted) samples.push_back({question_id, {}, std::nullopt});
        samples[it->second].annotations.push_back(parse_bt_level(rows[r][2]));
    }
    return samples;
}

analysis::MetricsReport evaluate_bt(const BTModel& model, const std::vector<BTExample>& test) {
    if (test.empty()) throw input_error("empty test set");
    std::vector<std::string> texts;
    std::vector<int> golds;
    texts.reserve(test.size());
    for (const BTExample& example : test) {
        int idx = class_index(model.classes, example.label);
        if (idx < 0)
            throw input_error(std::string("test label outside model classes: ") +
                              bt_level_name(example.label));
        texts.push_back(example.text);
        golds.push_back(idx);
    }
    std::vector<std::vector<double>> probs = batch_probs(model, texts);
    std::vector<int> preds;
    preds.reserve(test.size());
    for (const std::vector<double>& p : probs)
        preds.push_back(
            static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
    return analysis::classification_metrics(preds, golds, model.model.class_names);
}

void save_bt_model(const std::string& dir, const BTModel& model) {
    nn::Encoder encoder(model.model.config, model.model.weights);
    nn::save_model(dir, encoder, model.model.tokenizer, model.model.class_names,
                   model.model.fingerprint);
}

BTModel load_bt_model(const std::string& dir) {
    BTModel model;
    model.model = nn::load_model(dir);
    if (model.model.class_names.size() != 6 && model.model.class_names.size() != 7)
        throw io_error("expected a 6- or 7-class model in " + dir);
    for (const std::string& name : model.model.class_names)
        model.classes.push_back(parse_bt_level(name));
    return model;
}

}  // namespace qmine::btclass
