#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "qmine/common/rng.hpp"

namespace qmine::nn {

struct EncoderConfig {
    int vocab_size = 0;
    int max_len = 128;
    int d_model = 64;
    int n_layers = 2;  // 0 = bag of embeddings
    int n_heads = 4;
    int d_ffn = 128;
    int head_layers = 2;  // dense+ReLU layers before the classifier
    int head_dim = 64;
    int n_classes = 2;
    float dropout = 0.2f;

    void validate() const;
    size_t param_count() const;
};

// Named checkpoint presets: "mini" (2-layer bidirectional encoder) and
// "bow-tiny" (embedding average, for the fastest tests). vocab_size and
// n_classes are filled in by the caller.
EncoderConfig preset_config(const std::string& checkpoint);

struct TensorInfo {
    std::string name;
    size_t offset = 0;
    size_t count = 0;
};

// Flat parameter buffer plus a registry so the optimizer and the save format
// see one contiguous array.
class ParamStore {
public:
    explicit ParamStore(const EncoderConfig& config);

    std::vector<float>& data() { return data_; }
    const std::vector<float>& data() const { return data_; }
    std::vector<float>& grad() { return grad_; }
    const std::vector<TensorInfo>& tensors() const { return tensors_; }

    float* param(const std::string& name);
    float* grad_of(const std::string& name);
    size_t count(const std::string& name) const;

    void zero_grad();
    void init(uint64_t seed);  // deterministic preset initialization

private:
    const TensorInfo& info(const std::string& name) const;

    std::vector<float> data_;
    std::vector<float> grad_;
    std::vector<TensorInfo> tensors_;
    std::unordered_map<std::string, size_t> index_;
};

// One encoded input: token ids, already truncated to max_len.
struct EncodedExample {
    std::vector<int> ids;
};

struct BatchActivations;  // opaque cache shared by forward/backward

class Encoder {
public:
    Encoder(EncoderConfig config, uint64_t init_seed);
    Encoder(EncoderConfig config, std::vector<float> weights);
    Encoder(Encoder&&) noexcept;
    Encoder& operator=(Encoder&&) noexcept;
    ~Encoder();

    const EncoderConfig& config() const { return config_; }
    ParamStore& params() { return params_; }
    const ParamStore& params() const { return params_; }

    // Logits for a batch, row-major [batch, n_classes]. With train=true,
    // dropout masks are drawn from rng and the activation cache is kept for
    // backward().
    std::vector<float> forward(const std::vector<const EncodedExample*>& batch, bool train,
                               Rng* rng);

    // dlogits is row-major [batch, n_classes]; accumulates into params grad.
    void backward(const std::vector<float>& dlogits);

private:
    EncoderConfig config_;
    ParamStore params_;
    std::unique_ptr<BatchActivations> cache_;
};

}  // namespace qmine::nn
