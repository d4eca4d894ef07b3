#include "qmine/nn/model_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"

namespace qmine::nn {

using jsonl::json;
namespace fs = std::filesystem;

namespace {

constexpr char kWeightsMagic[4] = {'Q', 'M', 'N', 'W'};
constexpr uint32_t kWeightsVersion = 1;

void write_weights(const std::string& path, const std::vector<float>& weights) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out.write(kWeightsMagic, 4);
    uint32_t version = kWeightsVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    uint64_t count = weights.size();
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    out.write(reinterpret_cast<const char*>(weights.data()),
              static_cast<std::streamsize>(count * sizeof(float)));
    if (!out) throw io_error("short write to " + path);
}

std::vector<float> read_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw not_found_error("missing model weights: " + path);
    char magic[4];
    uint32_t version = 0;
    uint64_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in || std::memcmp(magic, kWeightsMagic, 4) != 0)
        throw io_error("bad weights header in " + path);
    if (version != kWeightsVersion)
        throw io_error("unsupported weights version " + std::to_string(version));
    std::vector<float> weights(count);
    in.read(reinterpret_cast<char*>(weights.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (!in) throw io_error("truncated weights in " + path);
    return weights;
}

json config_to_json(const EncoderConfig& config) {
    return json{{"vocab_size", config.vocab_size},
                {"max_len", config.max_len},
                {"d_model", config.d_model},
                {"n_layers", config.n_layers},
                {"n_heads", config.n_heads},
                {"d_ffn", config.d_ffn},
                {"head_layers", config.head_layers},
                {"head_dim", config.head_dim},
                {"n_classes", config.n_classes},
                {"dropout", config.dropout}};
}

EncoderConfig config_from_json(const json& j) {
    EncoderConfig config;
    config.vocab_size = j.at("vocab_size").get<int>();
    config.max_len = j.at("max_len").get<int>();
    config.d_model = j.at("d_model").get<int>();
    config.n_layers = j.at("n_layers").get<int>();
    config.n_heads = j.at("n_heads").get<int>();
    config.d_ffn = j.at("d_ffn").get<int>();
    config.head_layers = j.at("head_layers").get<int>();
    config.head_dim = j.at("head_dim").get<int>();
    config.n_classes = j.at("n_classes").get<int>();
    config.dropout = j.at("dropout").get<float>();
    config.validate();
    return config;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out << j.dump(2) << "\n";
    if (!out) throw io_error("short write to " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw not_found_error("missing model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw io_error("cannot parse " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

void save_model(const std::string& dir, const Encoder& encoder, const WordTokenizer& tokenizer,
                const std::vector<std::string>& class_names,
                const ModelFingerprint& fingerprint) {
    if (class_names.size() != static_cast<size_t>(encoder.config().n_classes))
        throw input_error("class_names must match n_classes");
    fs::create_directories(dir);
    write_weights((fs::path(dir) / "weights.bin").string(), encoder.params().data());
    json config = config_to_json(encoder.config());
    config["class_names"] = class_names;
    write_json_file((fs::path(dir) / "config.json").string(), config);
    tokenizer.save((fs::path(dir) / "vocab.txt").string());
    json fp{{"dataset_sha256", fingerprint.dataset_sha256},
            {"seed", fingerprint.seed},
            {"tool_version", fingerprint.tool_version}};
    write_json_file((fs::path(dir) / "fingerprint.json").string(), fp);
}

Model load_model(const std::string& dir) {
    if (!fs::is_directory(dir)) throw not_found_error("missing model directory: " + dir);
    Model model;
    json config = read_json_file((fs::path(dir) / "config.json").string());
    model.config = config_from_json(config);
    if (config.contains("class_names"))
        model.class_names = config.at("class_names").get<std::vector<std::string>>();
    if (!model.class_names.empty() &&
        model.class_names.size() != static_cast<size_t>(model.config.n_classes))
        throw io_error("class_names mismatch in " + dir);
    model.weights = read_weights((fs::path(dir) / "weights.bin").string());
    EncoderConfig check = model.config;
    if (model.weights.size() != check.param_count())
        throw io_error("weights size mismatch in " + dir);
    fs::path vocab_path = fs::path(dir) / "vocab.txt";
    if (!fs::exists(vocab_path)) throw not_found_error("missing model file: " + vocab_path.string());
    model.tokenizer = WordTokenizer::load(vocab_path.string());
    if (model.tokenizer.size() != static_cast<size_t>(model.config.vocab_size))
        throw io_error("vocab size mismatch in " + dir);
    fs::path fp_path = fs::path(dir) / "fingerprint.json";
    if (fs::exists(fp_path)) {
        json fp = read_json_file(fp_path.string());
        model.fingerprint.dataset_sha256 = fp.value("dataset_sha256", "");
        model.fingerprint.seed = fp.value("seed", static_cast<uint64_t>(0));
        model.fingerprint.tool_version = fp.value("tool_version", "");
    }
    return model;
}

}  // namespace qmine::nn
