#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qmine/teacher/prompts.hpp"

namespace qmine::teacher {

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    int max_tokens = 256;
    double temperature = 0.0;
    bool want_logprobs = false;
    std::string prompt_version;  // part of the cache key
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;
};

struct ChatResponse {
    std::string content;
    std::vector<TokenLogprob> logprobs;  // empty when the provider omits them
    std::string raw;                     // verbatim payload, kept for diagnostics
};

// Canonical JSON dump of the request; its SHA-256 is the cache key.
std::string canonical_request_json(const ChatRequest& request);
std::string request_key(const ChatRequest& request);

class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

struct HttpLlmConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "LLM_API_KEY";
    int max_retries = 3;
    int backoff_ms = 1000;
};

// OpenAI-style chat completions over HTTPS. Throws credential_error when the
// key env var is unset, rate_limit_error after exhausting retries on 429.
class HttpLlmBackend final : public LlmBackend {
public:
    explicit HttpLlmBackend(HttpLlmConfig config);
    ChatResponse complete(const ChatRequest& request) override;

private:
    HttpLlmConfig config_;
};

// Record/replay cache: responses stored one file per request key. Without an
// inner backend a miss raises not_found_error, which keeps CI offline.
class ReplayBackend final : public LlmBackend {
public:
    ReplayBackend(std::string cache_dir, std::shared_ptr<LlmBackend> inner = nullptr);
    ChatResponse complete(const ChatRequest& request) override;

    bool has(const ChatRequest& request) const;

private:
    std::string entry_path(const std::string& key) const;

    std::string cache_dir_;
    std::shared_ptr<LlmBackend> inner_;
    std::mutex mutex_;
};

// Test backend: answers from a handler function.
class ScriptedBackend final : public LlmBackend {
public:
    using Handler = std::function<ChatResponse(const ChatRequest&)>;
    explicit ScriptedBackend(Handler handler) : handler_(std::move(handler)) {}
    ChatResponse complete(const ChatRequest& request) override { return handler_(request); }

private:
    Handler handler_;
};

}  // namespace qmine::teacher
