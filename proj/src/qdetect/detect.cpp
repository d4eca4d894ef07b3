#include "qmine/qdetect/detect.hpp"

#include <cmath>

#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/sha256.hpp"
#include "qmine/common/text.hpp"

namespace qmine::qdetect {

using jsonl::json;

namespace {

const char* kClassNames[2] = {"non-interrogative", "interrogative"};

std::string dataset_hash(const std::vector<DetectExample>& examples) {
    Sha256 hash;
    for (const DetectExample& example : examples) {
        hash.update(example.text);
        hash.update("\x1f");
        hash.update(std::to_string(example.label));
        hash.update("\n");
    }
    return hash.hex_digest();
}

std::vector<nn::TrainExample> encode_examples(const std::vector<DetectExample>& examples,
                                              const nn::WordTokenizer& tokenizer, int max_len) {
    std::vector<nn::TrainExample> out;
    out.reserve(examples.size());
    for (const DetectExample& example : examples) {
        nn::TrainExample te;
        te.ids = tokenizer.encode(example.text, max_len);
        te.target = example.label;
        if (example.teacher)
            te.teacher = std::vector<double>{example.teacher->p_non_interrogative,
                                             example.teacher->p_interrogative};
        out.push_back(std::move(te));
    }
    return out;
}

}  // namespace

std::vector<DetectExample> load_detect_examples(const std::string& path) {
    std::vector<DetectExample> examples;
    jsonl::for_each_record(path, [&](const json& record) {
        DetectExample example;
        example.text = record.at("text").get<std::string>();
        example.label = record.at("label").get<int>();
        if (example.label != 0 && example.label != 1)
            throw dataset_error("label must be 0 or 1, got " + std::to_string(example.label));
        if (record.contains("teacher") && !record.at("teacher").is_null()) {
            const json& t = record.at("teacher");
            teacher::SoftLabel soft;
            soft.p_interrogative = t.at("p_interrogative").get<double>();
            soft.p_non_interrogative =
                t.value("p_non_interrogative", 1.0 - soft.p_interrogative);
            soft.label_token_logprob = t.value("label_token_logprob", 0.0);
            soft.fallback = t.value("fallback", false);
            example.teacher = soft;
        }
        examples.push_back(std::move(example));
    });
    return examples;
}

void save_detect_examples(const std::vector<DetectExample>& examples, const std::string& path) {
    jsonl::Writer writer(path);
    for (const DetectExample& example : examples) {
        json record{{"text", example.text}, {"label", example.label}};
        if (example.teacher) {
            record["teacher"] = json{{"p_interrogative", example.teacher->p_interrogative},
                                     {"p_non_interrogative", example.teacher->p_non_interrogative},
                                     {"label_token_logprob", example.teacher->label_token_logprob},
                                     {"fallback", example.teacher->fallback}};
        }
        writer.write(record);
    }
    writer.close();
}

DetectorModel train_detector(const std::vector<DetectExample>& train,
                             const std::vector<DetectExample>& val, const DistillConfig& dcfg,
                             const nn::TrainConfig& tcfg) {
    dcfg.validate();
    tcfg.validate();
    if (train.empty()) throw input_error("empty training set");
    for (const DetectExample& example : train) {
        if (example.label != 0 && example.label != 1)
            throw dataset_error("detector labels must be 0 or 1");
        if (dcfg.alpha > 0.0 && !example.teacher)
            throw dataset_error("alpha > 0 requires a teacher soft label on every example");
    }

    std::vector<std::string> texts;
    texts.reserve(train.size());
    for (const DetectExample& example : train) texts.push_back(example.text);
    nn::WordTokenizer tokenizer;
    tokenizer.build(texts, static_cast<size_t>(tcfg.vocab_size));

    nn::EncoderConfig config = nn::preset_config(tcfg.encoder_checkpoint);
    config.vocab_size = static_cast<int>(tokenizer.size());
    config.max_len = tcfg.max_sequence_length;
    config.n_classes = 2;
    config.dropout = tcfg.dropout;

    nn::Encoder encoder(config, tcfg.seed);
    std::vector<nn::TrainExample> train_enc =
        encode_examples(train, tokenizer, tcfg.max_sequence_length);
    std::vector<nn::TrainExample> val_enc =
        encode_examples(val, tokenizer, tcfg.max_sequence_length);

    DetectorModel detector;
    detector.training =
        nn::train_loop(encoder, train_enc, val_enc, make_distill_objective(dcfg), tcfg);
    detector.model.config = config;
    detector.model.tokenizer = std::move(tokenizer);
    detector.model.weights = detector.training.best_weights;
    detector.model.class_names = {kClassNames[0], kClassNames[1]};
    detector.model.fingerprint = {dataset_hash(train), tcfg.seed, "0.1.0"};
    return detector;
}

std::vector<Prediction> predict_interrogative(const DetectorModel& model,
                                              const std::vector<std::string>& texts,
                                              double threshold) {
    std::vector<Prediction> predictions(texts.size());
    std::vector<size_t> live;
    std::vector<nn::EncodedExample> encoded;
    for (size_t i = 0; i < texts.size(); ++i) {
        if (text::trim(texts[i]).empty()) {
            log_warn("qdetect", "empty text scored as non-interrogative with p = 0");
            predictions[i] = {0, 0.0};
            continue;
        }
        live.push_back(i);
        encoded.push_back({model.model.tokenizer.encode(texts[i], model.model.config.max_len)});
    }
    if (live.empty()) return predictions;

    nn::Encoder encoder = model.model.make_encoder();
    constexpr size_t kChunk = 64;
    for (size_t begin = 0; begin < live.size(); begin += kChunk) {
        size_t end = std::min(live.size(), begin + kChunk);
        std::vector<const nn::EncodedExample*> batch;
        for (size_t j = begin; j < end; ++j) batch.push_back(&encoded[j]);
        std::vector<float> logits = encoder.forward(batch, false, nullptr);
        for (size_t j = begin; j < end; ++j) {
            double z0 = logits[(j - begin) * 2];
            double z1 = logits[(j - begin) * 2 + 1];
            double m = std::max(z0, z1);
            double e0 = std::exp(z0 - m), e1 = std::exp(z1 - m);
            double p = e1 / (e0 + e1);
            predictions[live[j]] = {p >= threshold ? 1 : 0, p};
        }
    }
    return predictions;
}

analysis::MetricsReport evaluate_detector(const DetectorModel& model,
                                          const std::vector<DetectExample>& test) {
    if (test.empty()) throw input_error("empty test set");
    std::vector<std::string> texts;
    std::vector<int> golds;
    texts.reserve(test.size());
    for (const DetectExample& example : test) {
        texts.push_back(example.text);
        golds.push_back(example.label);
    }
    std::vector<Prediction> predictions = predict_interrogative(model, texts);
    std::vector<int> preds;
    preds.reserve(predictions.size());
    for (const Prediction& p : predictions) preds.push_back(p.label);
    return analysis::classification_metrics(preds, golds, {kClassNames[0], kClassNames[1]});
}

void save_detector(const std::string& dir, const DetectorModel& model) {
    nn::Encoder encoder(model.model.config, model.model.weights);
    nn::save_model(dir, encoder, model.model.tokenizer, model.model.class_names,
                   model.model.fingerprint);
}

DetectorModel load_detector(const std::string& dir) {
    DetectorModel detector;
    detector.model = nn::load_model(dir);
    if (detector.model.config.n_classes != 2)
        throw io_error("detector model must have 2 classes");
    return detector;
}

}  // namespace qmine::qdetect
