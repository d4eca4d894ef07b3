#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmine/nn/encoder.hpp"
#include "qmine/nn/tokenizer.hpp"

namespace qmine::nn {

struct ModelFingerprint {
    std::string dataset_sha256;
    uint64_t seed = 0;
    std::string tool_version;
};

// On-disk model directory: weights.bin, config.json, vocab.txt,
// fingerprint.json.
struct Model {
    EncoderConfig config;
    WordTokenizer tokenizer;
    std::vector<float> weights;
    std::vector<std::string> class_names;
    ModelFingerprint fingerprint;

    Encoder make_encoder() const { return Encoder(config, weights); }
};

void save_model(const std::string& dir, const Encoder& encoder, const WordTokenizer& tokenizer,
                const std::vector<std::string>& class_names,
                const ModelFingerprint& fingerprint);

// Missing directory or any of its files raises a missing-model error.
Model load_model(const std::string& dir);

}  // namespace qmine::nn
