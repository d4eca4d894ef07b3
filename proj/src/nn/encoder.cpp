#include "qmine/nn/encoder.hpp"

#include <cmath>
#include <cstring>

#include "qmine/common/errors.hpp"
#include "qmine/kernels/kernels.hpp"
#include "qmine/nn/tokenizer.hpp"

namespace qmine::nn {

namespace {

constexpr float kLnEps = 1e-5f;
constexpr float kMaskScore = -1e9f;

const kernels::Ops& ops() {
    return kernels::active_ops();
}

void add_bias_rows(float* x, const float* bias, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) ops().axpy(1.0f, bias, x + r * cols, cols);
}

void bias_grad_rows(const float* dy, float* dbias, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) ops().axpy(1.0f, dy + r * cols, dbias, cols);
}

// y = gamma * (x - mu) / sqrt(var + eps) + beta, per row; caches xhat and
// 1/sqrt(var + eps).
void layer_norm_forward(const float* x, const float* gamma, const float* beta, float* y,
                        float* xhat, float* inv_std, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float* xr = x + r * cols;
        float mu = ops().sum(xr, cols) / static_cast<float>(cols);
        float var = 0.0f;
        for (size_t d = 0; d < cols; ++d) {
            float c = xr[d] - mu;
            var += c * c;
        }
        var /= static_cast<float>(cols);
        float inv = 1.0f / std::sqrt(var + kLnEps);
        inv_std[r] = inv;
        float* xhr = xhat + r * cols;
        float* yr = y + r * cols;
        for (size_t d = 0; d < cols; ++d) {
            xhr[d] = (xr[d] - mu) * inv;
            yr[d] = gamma[d] * xhr[d] + beta[d];
        }
    }
}

void layer_norm_backward(const float* dy, const float* xhat, const float* inv_std,
                         const float* gamma, float* dgamma, float* dbeta, float* dx,
                         size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float* dyr = dy + r * cols;
        const float* xhr = xhat + r * cols;
        float m1 = 0.0f, m2 = 0.0f;
        for (size_t d = 0; d < cols; ++d) {
            dgamma[d] += dyr[d] * xhr[d];
            dbeta[d] += dyr[d];
            float dxh = dyr[d] * gamma[d];
            m1 += dxh;
            m2 += dxh * xhr[d];
        }
        m1 /= static_cast<float>(cols);
        m2 /= static_cast<float>(cols);
        float* dxr = dx + r * cols;
        for (size_t d = 0; d < cols; ++d) {
            float dxh = dyr[d] * gamma[d];
            dxr[d] = inv_std[r] * (dxh - m1 - xhr[d] * m2);
        }
    }
}

struct LayerCache {
    std::vector<float> x_in;      // [B*L, D]
    std::vector<float> xhat1, xhat2;
    std::vector<float> inv_std1, inv_std2;  // [B*L]
    std::vector<float> h1;        // post-LN1 [B*L, D]
    std::vector<float> q, k, v;   // [B*L, D]
    std::vector<float> probs;     // [B, H, L, L]
    std::vector<float> ctx;       // [B*L, D]
    std::vector<float> x_mid;     // [B*L, D]
    std::vector<float> h2;        // post-LN2 [B*L, D]
    std::vector<float> f1;        // post-ReLU [B*L, F]
};

struct HeadCache {
    std::vector<float> input;     // [B, in_dim]
    std::vector<float> relu;      // [B, out_dim], pre-dropout
    std::vector<float> drop_scale;  // [B, out_dim], 0 or 1/(1-p)
};

}  // namespace

struct BatchActivations {
    size_t batch = 0, seq = 0;
    std::vector<int> ids;        // [B*L], kPadId on padding
    std::vector<float> mask;     // [B*L]
    std::vector<float> n_valid;  // [B]
    std::vector<float> x0;       // [B*L, D]
    std::vector<LayerCache> layers;
    std::vector<float> x_final;  // alias of last layer output
    std::vector<float> xhatf, inv_stdf;
    std::vector<float> y;        // pooled input [B*L, D]
    std::vector<float> pooled;   // [B, D]
    std::vector<HeadCache> head;
    std::vector<float> head_out;  // classifier input [B, in_dim]
    bool train = false;
};

void EncoderConfig::validate() const {
    if (vocab_size < 2) throw config_error("vocab_size must be >= 2");
    if (max_len < 1 || d_model < 1 || n_classes < 2) throw config_error("bad encoder dimensions");
    if (n_layers < 0 || head_layers < 0) throw config_error("negative layer count");
    if (n_layers > 0 && (n_heads < 1 || d_model % n_heads != 0))
        throw config_error("d_model must be divisible by n_heads");
    if (dropout < 0.0f || dropout >= 1.0f) throw config_error("dropout must be in [0, 1)");
}

EncoderConfig preset_config(const std::string& checkpoint) {
    EncoderConfig config;
    if (checkpoint == "mini") {
        config.d_model = 64;
        config.n_layers = 2;
        config.n_heads = 4;
        config.d_ffn = 128;
        config.head_layers = 2;
        config.head_dim = 64;
    } else if (checkpoint == "bow-tiny") {
        config.d_model = 32;
        config.n_layers = 0;
        config.n_heads = 1;
        config.d_ffn = 32;
        config.head_layers = 1;
        config.head_dim = 32;
    } else {
        throw config_error("unknown encoder checkpoint '" + checkpoint +
                           "' (known: mini, bow-tiny)");
    }
    return config;
}

ParamStore::ParamStore(const EncoderConfig& config) {
    config.validate();
    size_t offset = 0;
    auto add = [&](const std::string& name, size_t count) {
        index_[name] = tensors_.size();
        tensors_.push_back({name, offset, count});
        offset += count;
    };
    const size_t d = static_cast<size_t>(config.d_model);
    add("tok_emb", static_cast<size_t>(config.vocab_size) * d);
    add("pos_emb", static_cast<size_t>(config.max_len) * d);
    for (int l = 0; l < config.n_layers; ++l) {
        std::string p = "layer" + std::to_string(l) + ".";
        add(p + "ln1.gamma", d);
        add(p + "ln1.beta", d);
        add(p + "attn.wq", d * d);
        add(p + "attn.bq", d);
        add(p + "attn.wk", d * d);
        add(p + "attn.bk", d);
        add(p + "attn.wv", d * d);
        add(p + "attn.bv", d);
        add(p + "attn.wo", d * d);
        add(p + "attn.bo", d);
        add(p + "ln2.gamma", d);
        add(p + "ln2.beta", d);
        add(p + "ffn.w1", d * static_cast<size_t>(config.d_ffn));
        add(p + "ffn.b1", static_cast<size_t>(config.d_ffn));
        add(p + "ffn.w2", static_cast<size_t>(config.d_ffn) * d);
        add(p + "ffn.b2", d);
    }
    if (config.n_layers > 0) {
        add("final_ln.gamma", d);
        add("final_ln.beta", d);
    }
    size_t in_dim = d;
    for (int h = 0; h < config.head_layers; ++h) {
        std::string p = "head" + std::to_string(h) + ".";
        add(p + "w", in_dim * static_cast<size_t>(config.head_dim));
        add(p + "b", static_cast<size_t>(config.head_dim));
        in_dim = static_cast<size_t>(config.head_dim);
    }
    add("classifier.w", in_dim * static_cast<size_t>(config.n_classes));
    add("classifier.b", static_cast<size_t>(config.n_classes));

    data_.assign(offset, 0.0f);
    grad_.assign(offset, 0.0f);
}

const TensorInfo& ParamStore::info(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw input_error("unknown tensor " + name);
    return tensors_[it->second];
}

float* ParamStore::param(const std::string& name) {
    return data_.data() + info(name).offset;
}

float* ParamStore::grad_of(const std::string& name) {
    return grad_.data() + info(name).offset;
}

size_t ParamStore::count(const std::string& name) const {
    return info(name).count;
}

void ParamStore::zero_grad() {
    std::fill(grad_.begin(), grad_.end(), 0.0f);
}

void ParamStore::init(uint64_t seed) {
    Rng rng = make_rng(seed);
    std::normal_distribution<float> normal(0.0f, 0.02f);
    for (const TensorInfo& tensor : tensors_) {
        float* p = data_.data() + tensor.offset;
        bool is_gamma = tensor.name.size() >= 5 &&
                        tensor.name.compare(tensor.name.size() - 5, 5, "gamma") == 0;
        bool is_zero = tensor.name.find("beta") != std::string::npos ||
                       tensor.name.rfind(".b") == tensor.name.size() - 2 ||
                       tensor.name.rfind(".bq") == tensor.name.size() - 3 ||
                       tensor.name.rfind(".bk") == tensor.name.size() - 3 ||
                       tensor.name.rfind(".bv") == tensor.name.size() - 3 ||
                       tensor.name.rfind(".bo") == tensor.name.size() - 3 ||
                       tensor.name.rfind(".b1") == tensor.name.size() - 3 ||
                       tensor.name.rfind(".b2") == tensor.name.size() - 3;
        if (is_gamma) {
            std::fill(p, p + tensor.count, 1.0f);
        } else if (is_zero) {
            std::fill(p, p + tensor.count, 0.0f);
        } else {
            for (size_t i = 0; i < tensor.count; ++i) p[i] = normal(rng);
        }
    }
}

size_t EncoderConfig::param_count() const {
    return ParamStore(*this).data().size();
}

Encoder::Encoder(EncoderConfig config, uint64_t init_seed)
    : config_(config), params_(config) {
    params_.init(init_seed);
}

Encoder::Encoder(EncoderConfig config, std::vector<float> weights)
    : config_(config), params_(config) {
    if (weights.size() != params_.data().size())
        throw io_error("weight count mismatch: expected " +
                       std::to_string(params_.data().size()) + ", got " +
                       std::to_string(weights.size()));
    params_.data() = std::move(weights);
}

Encoder::Encoder(Encoder&&) noexcept = default;
Encoder& Encoder::operator=(Encoder&&) noexcept = default;
Encoder::~Encoder() = default;

std::vector<float> Encoder::forward(const std::vector<const EncodedExample*>& batch, bool train,
                                    Rng* rng) {
    const size_t B = batch.size();
    if (B == 0) throw input_error("empty batch");
    if (train && !rng) throw input_error("training forward requires an rng");
    const size_t D = static_cast<size_t>(config_.d_model);
    const size_t F = static_cast<size_t>(config_.d_ffn);
    const size_t H = static_cast<size_t>(config_.n_heads);
    size_t L = 1;
    for (const EncodedExample* example : batch)
        L = std::max(L, example->ids.size());
    L = std::min(L, static_cast<size_t>(config_.max_len));

    cache_ = std::make_unique<BatchActivations>();
    BatchActivations& c = *cache_;
    c.batch = B;
    c.seq = L;
    c.train = train;
    c.ids.assign(B * L, kPadId);
    c.mask.assign(B * L, 0.0f);
    c.n_valid.assign(B, 0.0f);
    for (size_t b = 0; b < B; ++b) {
        const std::vector<int>& ids = batch[b]->ids;
        size_t n = std::min(ids.size(), L);
        for (size_t t = 0; t < n; ++t) {
            c.ids[b * L + t] = ids[t];
            c.mask[b * L + t] = 1.0f;
        }
        c.n_valid[b] = static_cast<float>(std::max<size_t>(n, 1));
    }

    // Embedding lookup with learned positions.
    const float* tok_emb = params_.param("tok_emb");
    const float* pos_emb = params_.param("pos_emb");
    c.x0.assign(B * L * D, 0.0f);
    for (size_t b = 0; b < B; ++b) {
        for (size_t t = 0; t < L; ++t) {
            if (c.mask[b * L + t] == 0.0f) continue;
            float* row = c.x0.data() + (b * L + t) * D;
            const float* te = tok_emb + static_cast<size_t>(c.ids[b * L + t]) * D;
            const float* pe = pos_emb + t * D;
            for (size_t d = 0; d < D; ++d) row[d] = te[d] + pe[d];
        }
    }

    const size_t rows = B * L;
    std::vector<float> x = c.x0;
    c.layers.resize(static_cast<size_t>(config_.n_layers));
    const size_t Dh = config_.n_layers > 0 ? D / H : 0;
    const float scale = config_.n_layers > 0 ? 1.0f / std::sqrt(static_cast<float>(Dh)) : 0.0f;
    std::vector<float> qh, kh, vh, scores, ctxh;
    for (int l = 0; l < config_.n_layers; ++l) {
        LayerCache& lc = c.layers[static_cast<size_t>(l)];
        const std::string p = "layer" + std::to_string(l) + ".";
        lc.x_in = x;
        lc.h1.assign(rows * D, 0.0f);
        lc.xhat1.assign(rows * D, 0.0f);
        lc.inv_std1.assign(rows, 0.0f);
        layer_norm_forward(lc.x_in.data(), params_.param(p + "ln1.gamma"),
                           params_.param(p + "ln1.beta"), lc.h1.data(), lc.xhat1.data(),
                           lc.inv_std1.data(), rows, D);

        lc.q.assign(rows * D, 0.0f);
        lc.k.assign(rows * D, 0.0f);
        lc.v.assign(rows * D, 0.0f);
        ops().matmul_nn(rows, D, D, lc.h1.data(), params_.param(p + "attn.wq"), lc.q.data(), false);
        ops().matmul_nn(rows, D, D, lc.h1.data(), params_.param(p + "attn.wk"), lc.k.data(), false);
        ops().matmul_nn(rows, D, D, lc.h1.data(), params_.param(p + "attn.wv"), lc.v.data(), false);
        add_bias_rows(lc.q.data(), params_.param(p + "attn.bq"), rows, D);
        add_bias_rows(lc.k.data(), params_.param(p + "attn.bk"), rows, D);
        add_bias_rows(lc.v.data(), params_.param(p + "attn.bv"), rows, D);

        lc.probs.assign(B * H * L * L, 0.0f);
        lc.ctx.assign(rows * D, 0.0f);
        qh.assign(L * Dh, 0.0f);
        kh.assign(L * Dh, 0.0f);
        vh.assign(L * Dh, 0.0f);
        ctxh.assign(L * Dh, 0.0f);
        for (size_t b = 0; b < B; ++b) {
            for (size_t h = 0; h < H; ++h) {
                for (size_t t = 0; t < L; ++t) {
                    const float* src = lc.q.data() + (b * L + t) * D + h * Dh;
                    std::memcpy(qh.data() + t * Dh, src, Dh * sizeof(float));
                    src = lc.k.data() + (b * L + t) * D + h * Dh;
                    std::memcpy(kh.data() + t * Dh, src, Dh * sizeof(float));
                    src = lc.v.data() + (b * L + t) * D + h * Dh;
                    std::memcpy(vh.data() + t * Dh, src, Dh * sizeof(float));
                }
                float* probs = lc.probs.data() + (b * H + h) * L * L;
                ops().matmul_nt(L, L, Dh, qh.data(), kh.data(), probs, false);
                ops().scale(probs, L * L, scale);
                for (size_t i = 0; i < L; ++i)
                    for (size_t j = 0; j < L; ++j)
                        if (c.mask[b * L + j] == 0.0f) probs[i * L + j] += kMaskScore;
                ops().softmax_rows(probs, L, L);
                ops().matmul_nn(L, Dh, L, probs, vh.data(), ctxh.data(), false);
                for (size_t t = 0; t < L; ++t)
                    std::memcpy(lc.ctx.data() + (b * L + t) * D + h * Dh, ctxh.data() + t * Dh,
                                Dh * sizeof(float));
            }
        }

        lc.x_mid = lc.x_in;
        // attn_out = ctx * Wo + bo, accumulated onto the residual
        std::vector<float> attn_out(rows * D, 0.0f);
        ops().matmul_nn(rows, D, D, lc.ctx.data(), params_.param(p + "attn.wo"), attn_out.data(),
                        false);
        add_bias_rows(attn_out.data(), params_.param(p + "attn.bo"), rows, D);
        ops().axpy(1.0f, attn_out.data(), lc.x_mid.data(), rows * D);

        lc.h2.assign(rows * D, 0.0f);
        lc.xhat2.assign(rows * D, 0.0f);
        lc.inv_std2.assign(rows, 0.0f);
        layer_norm_forward(lc.x_mid.data(), params_.param(p + "ln2.gamma"),
                           params_.param(p + "ln2.beta"), lc.h2.data(), lc.xhat2.data(),
                           lc.inv_std2.data(), rows, D);
        lc.f1.assign(rows * F, 0.0f);
        ops().matmul_nn(rows, F, D, lc.h2.data(), params_.param(p + "ffn.w1"), lc.f1.data(), false);
        add_bias_rows(lc.f1.data(), params_.param(p + "ffn.b1"), rows, F);
        ops().relu_inplace(lc.f1.data(), rows * F);

        x = lc.x_mid;
        ops().matmul_nn(rows, D, F, lc.f1.data(), params_.param(p + "ffn.w2"), x.data(), true);
        add_bias_rows(x.data(), params_.param(p + "ffn.b2"), rows, D);
    }

    if (config_.n_layers > 0) {
        c.x_final = x;
        c.y.assign(rows * D, 0.0f);
        c.xhatf.assign(rows * D, 0.0f);
        c.inv_stdf.assign(rows, 0.0f);
        layer_norm_forward(c.x_final.data(), params_.param("final_ln.gamma"),
                           params_.param("final_ln.beta"), c.y.data(), c.xhatf.data(),
                           c.inv_stdf.data(), rows, D);
    } else {
        c.y = x;
    }

    // Mean pool over valid positions.
    c.pooled.assign(B * D, 0.0f);
    for (size_t b = 0; b < B; ++b) {
        float* out = c.pooled.data() + b * D;
        for (size_t t = 0; t < L; ++t)
            if (c.mask[b * L + t] != 0.0f) ops().axpy(1.0f, c.y.data() + (b * L + t) * D, out, D);
        ops().scale(out, D, 1.0f / c.n_valid[b]);
    }

    // Classification head: dense+ReLU layers with inverted dropout.
    std::vector<float> a = c.pooled;
    size_t in_dim = D;
    const float keep = 1.0f - config_.dropout;
    c.head.resize(static_cast<size_t>(config_.head_layers));
    for (int h = 0; h < config_.head_layers; ++h) {
        HeadCache& hc = c.head[static_cast<size_t>(h)];
        const std::string p = "head" + std::to_string(h) + ".";
        const size_t out_dim = static_cast<size_t>(config_.head_dim);
        hc.input = a;
        hc.relu.assign(B * out_dim, 0.0f);
        ops().matmul_nn(B, out_dim, in_dim, hc.input.data(), params_.param(p + "w"),
                        hc.relu.data(), false);
        add_bias_rows(hc.relu.data(), params_.param(p + "b"), B, out_dim);
        ops().relu_inplace(hc.relu.data(), B * out_dim);
        a = hc.relu;
        if (train && config_.dropout > 0.0f) {
            hc.drop_scale.assign(B * out_dim, 0.0f);
            for (size_t i = 0; i < B * out_dim; ++i) {
                if (static_cast<float>(uniform01(*rng)) < keep) hc.drop_scale[i] = 1.0f / keep;
                a[i] *= hc.drop_scale[i];
            }
        }
        in_dim = out_dim;
    }
    c.head_out = a;

    std::vector<float> logits(B * static_cast<size_t>(config_.n_classes), 0.0f);
    ops().matmul_nn(B, static_cast<size_t>(config_.n_classes), in_dim, c.head_out.data(),
                    params_.param("classifier.w"), logits.data(), false);
    add_bias_rows(logits.data(), params_.param("classifier.b"), B,
                  static_cast<size_t>(config_.n_classes));
    if (!train) cache_.reset();
    return logits;
}

void Encoder::backward(const std::vector<float>& dlogits) {
    if (!cache_ || !cache_->train) throw input_error("backward requires a cached training forward");
    BatchActivations& c = *cache_;
    const size_t B = c.batch, L = c.seq;
    const size_t D = static_cast<size_t>(config_.d_model);
    const size_t F = static_cast<size_t>(config_.d_ffn);
    const size_t H = static_cast<size_t>(config_.n_heads);
    const size_t C = static_cast<size_t>(config_.n_classes);
    const size_t rows = B * L;
    if (dlogits.size() != B * C) throw input_error("dlogits size mismatch");

    // Classifier.
    size_t in_dim = config_.head_layers > 0 ? static_cast<size_t>(config_.head_dim) : D;
    ops().matmul_tn(in_dim, C, B, c.head_out.data(), dlogits.data(),
                    params_.grad_of("classifier.w"), true);
    bias_grad_rows(dlogits.data(), params_.grad_of("classifier.b"), B, C);
    std::vector<float> da(B * in_dim, 0.0f);
    ops().matmul_nt(B, in_dim, C, dlogits.data(), params_.param("classifier.w"), da.data(), false);

    // Head layers, reversed.
    for (int h = config_.head_layers - 1; h >= 0; --h) {
        HeadCache& hc = c.head[static_cast<size_t>(h)];
        const std::string p = "head" + std::to_string(h) + ".";
        const size_t out_dim = static_cast<size_t>(config_.head_dim);
        const size_t prev_dim = h == 0 ? D : static_cast<size_t>(config_.head_dim);
        if (!hc.drop_scale.empty())
            for (size_t i = 0; i < B * out_dim; ++i) da[i] *= hc.drop_scale[i];
        ops().relu_backward(hc.relu.data(), da.data(), B * out_dim);
        ops().matmul_tn(prev_dim, out_dim, B, hc.input.data(), da.data(),
                        params_.grad_of(p + "w"), true);
        bias_grad_rows(da.data(), params_.grad_of(p + "b"), B, out_dim);
        std::vector<float> dprev(B * prev_dim, 0.0f);
        ops().matmul_nt(B, prev_dim, out_dim, da.data(), params_.param(p + "w"), dprev.data(),
                        false);
        da = std::move(dprev);
    }

    // Un-pool.
    std::vector<float> dy(rows * D, 0.0f);
    for (size_t b = 0; b < B; ++b) {
        const float inv = 1.0f / c.n_valid[b];
        for (size_t t = 0; t < L; ++t) {
            if (c.mask[b * L + t] == 0.0f) continue;
            const float* src = da.data() + b * D;
            float* dst = dy.data() + (b * L + t) * D;
            for (size_t d = 0; d < D; ++d) dst[d] = src[d] * inv;
        }
    }

    std::vector<float> dx(rows * D, 0.0f);
    if (config_.n_layers > 0) {
        layer_norm_backward(dy.data(), c.xhatf.data(), c.inv_stdf.data(),
                            params_.param("final_ln.gamma"), params_.grad_of("final_ln.gamma"),
                            params_.grad_of("final_ln.beta"), dx.data(), rows, D);
    } else {
        dx = dy;
    }

    const size_t Dh = config_.n_layers > 0 ? D / H : 1;
    const float scale = 1.0f / std::sqrt(static_cast<float>(Dh));
    std::vector<float> qh(L * Dh), kh(L * Dh), vh(L * Dh);
    std::vector<float> dqh(L * Dh), dkh(L * Dh), dvh(L * Dh), dctxh(L * Dh);
    std::vector<float> dprobs(L * L), dscores(L * L);
    for (int l = config_.n_layers - 1; l >= 0; --l) {
        LayerCache& lc = c.layers[static_cast<size_t>(l)];
        const std::string p = "layer" + std::to_string(l) + ".";

        // FFN backward: dx is the gradient at the layer output.
        std::vector<float> df1(rows * F, 0.0f);
        ops().matmul_tn(F, D, rows, lc.f1.data(), dx.data(), params_.grad_of(p + "ffn.w2"), true);
        bias_grad_rows(dx.data(), params_.grad_of(p + "ffn.b2"), rows, D);
        ops().matmul_nt(rows, F, D, dx.data(), params_.param(p + "ffn.w2"), df1.data(), false);
        ops().relu_backward(lc.f1.data(), df1.data(), rows * F);
        ops().matmul_tn(D, F, rows, lc.h2.data(), df1.data(), params_.grad_of(p + "ffn.w1"), true);
        bias_grad_rows(df1.data(), params_.grad_of(p + "ffn.b1"), rows, F);
        std::vector<float> dh2(rows * D, 0.0f);
        ops().matmul_nt(rows, D, F, df1.data(), params_.param(p + "ffn.w1"), dh2.data(), false);
        std::vector<float> dx_mid(rows * D, 0.0f);
        layer_norm_backward(dh2.data(), lc.xhat2.data(), lc.inv_std2.data(),
                            params_.param(p + "ln2.gamma"), params_.grad_of(p + "ln2.gamma"),
                            params_.grad_of(p + "ln2.beta"), dx_mid.data(), rows, D);
        ops().axpy(1.0f, dx.data(), dx_mid.data(), rows * D);  // residual

        // Attention backward.
        std::vector<float> dctx(rows * D, 0.0f);
        ops().matmul_tn(D, D, rows, lc.ctx.data(), dx_mid.data(), params_.grad_of(p + "attn.wo"),
                        true);
        bias_grad_rows(dx_mid.data(), params_.grad_of(p + "attn.bo"), rows, D);
        ops().matmul_nt(rows, D, D, dx_mid.data(), params_.param(p + "attn.wo"), dctx.data(),
                        false);

        std::vector<float> dq(rows * D, 0.0f), dk(rows * D, 0.0f), dv(rows * D, 0.0f);
        for (size_t b = 0; b < B; ++b) {
            for (size_t h = 0; h < H; ++h) {
                for (size_t t = 0; t < L; ++t) {
                    std::memcpy(qh.data() + t * Dh, lc.q.data() + (b * L + t) * D + h * Dh,
                                Dh * sizeof(float));
                    std::memcpy(kh.data() + t * Dh, lc.k.data() + (b * L + t) * D + h * Dh,
                                Dh * sizeof(float));
                    std::memcpy(vh.data() + t * Dh, lc.v.data() + (b * L + t) * D + h * Dh,
                                Dh * sizeof(float));
                    std::memcpy(dctxh.data() + t * Dh, dctx.data() + (b * L + t) * D + h * Dh,
                                Dh * sizeof(float));
                }
                const float* probs = lc.probs.data() + (b * H + h) * L * L;
                ops().matmul_nt(L, L, Dh, dctxh.data(), vh.data(), dprobs.data(), false);
                ops().matmul_tn(L, Dh, L, probs, dctxh.data(), dvh.data(), false);
                for (size_t i = 0; i < L; ++i) {
                    const float* pr = probs + i * L;
                    const float* dpr = dprobs.data() + i * L;
                    float dot = ops().dot(pr, dpr, L);
                    float* dsc = dscores.data() + i * L;
                    for (size_t j = 0; j < L; ++j) dsc[j] = pr[j] * (dpr[j] - dot);
                }
                ops().scale(dscores.data(), L * L, scale);
                ops().matmul_nn(L, Dh, L, dscores.data(), kh.data(), dqh.data(), false);
                ops().matmul_tn(L, Dh, L, dscores.data(), qh.data(), dkh.data(), false);
                for (size_t t = 0; t < L; ++t) {
                    float* dst = dq.data() + (b * L + t) * D + h * Dh;
                    ops().axpy(1.0f, dqh.data() + t * Dh, dst, Dh);
                    dst = dk.data() + (b * L + t) * D + h * Dh;
                    ops().axpy(1.0f, dkh.data() + t * Dh, dst, Dh);
                    dst = dv.data() + (b * L + t) * D + h * Dh;
                    ops().axpy(1.0f, dvh.data() + t * Dh, dst, Dh);
                }
            }
        }

        ops().matmul_tn(D, D, rows, lc.h1.data(), dq.data(), params_.grad_of(p + "attn.wq"), true);
        ops().matmul_tn(D, D, rows, lc.h1.data(), dk.data(), params_.grad_of(p + "attn.wk"), true);
        ops().matmul_tn(D, D, rows, lc.h1.data(), dv.data(), params_.grad_of(p + "attn.wv"), true);
        bias_grad_rows(dq.data(), params_.grad_of(p + "attn.bq"), rows, D);
        bias_grad_rows(dk.data(), params_.grad_of(p + "attn.bk"), rows, D);
        bias_grad_rows(dv.data(), params_.grad_of(p + "attn.bv"), rows, D);
        std::vector<float> dh1(rows * D, 0.0f);
        ops().matmul_nt(rows, D, D, dq.data(), params_.param(p + "attn.wq"), dh1.data(), false);
        ops().matmul_nt(rows, D, D, dk.data(), params_.param(p + "attn.wk"), dh1.data(), true);
        ops().matmul_nt(rows, D, D, dv.data(), params_.param(p + "attn.wv"), dh1.data(), true);

        std::vector<float> dx_in(rows * D, 0.0f);
        layer_norm_backward(dh1.data(), lc.xhat1.data(), lc.inv_std1.data(),
                            params_.param(p + "ln1.gamma"), params_.grad_of(p + "ln1.gamma"),
                            params_.grad_of(p + "ln1.beta"), dx_in.data(), rows, D);
        ops().axpy(1.0f, dx_mid.data(), dx_in.data(), rows * D);  // residual
        dx = std::move(dx_in);
    }

    // Embedding scatter.
    float* dtok = params_.grad_of("tok_emb");
    float* dpos = params_.grad_of("pos_emb");
    for (size_t b = 0; b < B; ++b) {
        for (size_t t = 0; t < L; ++t) {
            if (c.mask[b * L + t] == 0.0f) continue;
            const float* src = dx.data() + (b * L + t) * D;
            ops().axpy(1.0f, src, dtok + static_cast<size_t>(c.ids[b * L + t]) * D, D);
            ops().axpy(1.0f, src, dpos + t * D, D);
        }
    }
    cache_.reset();
}

}  // namespace qmine::nn
