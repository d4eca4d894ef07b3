#include "qmine/teacher/llm_client.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/sha256.hpp"

namespace qmine::teacher {

using json = nlohmann::json;

std::string canonical_request_json(const ChatRequest& request) {
    json messages = json::array();
    for (const ChatMessage& message : request.messages)
        messages.push_back({{"content", message.content}, {"role", message.role}});
    json j{{"max_tokens", request.max_tokens},
           {"messages", messages},
           {"model", request.model},
           {"prompt_version", request.prompt_version},
           {"temperature", request.temperature},
           {"want_logprobs", request.want_logprobs}};
    return j.dump();
}

std::string request_key(const ChatRequest& request) {
    return sha256_hex(canonical_request_json(request));
}

HttpLlmBackend::HttpLlmBackend(HttpLlmConfig config) : config_(std::move(config)) {}

ChatResponse HttpLlmBackend::complete(const ChatRequest& request) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key)
        throw credential_error("environment variable " + config_.api_key_env + " is not set");

    json body{{"model", request.model}, {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};
    json messages = json::array();
    for (const ChatMessage& message : request.messages)
        messages.push_back({{"role", message.role}, {"content", message.content}});
    body["messages"] = messages;
    if (request.want_logprobs) {
        body["logprobs"] = true;
        body["top_logprobs"] = 1;
    }

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};

    std::string last_error;
    for (int attempt = 0; attempt < config_.max_retries; ++attempt) {
        if (attempt > 0) {
            int delay = config_.backoff_ms << (attempt - 1);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        auto result = client.Post(config_.path, headers, body.dump(), "application/json");
        if (!result) {
            last_error = "transport error: " + httplib::to_string(result.error());
            log_warn("teacher", last_error);
            continue;
        }
        if (result->status == 401 || result->status == 403)
            throw credential_error("provider rejected credentials (HTTP " +
                                   std::to_string(result->status) + ")");
        if (result->status == 404) throw not_found_error("provider endpoint not found");
        if (result->status == 429 || result->status >= 500) {
            last_error = "HTTP " + std::to_string(result->status);
            log_warn("teacher", "retryable response " + last_error);
            if (attempt + 1 == config_.max_retries && result->status == 429)
                throw rate_limit_error("rate limited after " +
                                       std::to_string(config_.max_retries) + " attempts");
            continue;
        }
        if (result->status != 200)
            throw io_error("unexpected HTTP status " + std::to_string(result->status));

        json payload;
        try {
            payload = json::parse(result->body);
        } catch (const json::parse_error& e) {
            throw annotation_error(std::string("unparseable provider payload: ") + e.what(),
                                   result->body);
        }
        ChatResponse response;
        response.raw = result->body;
        try {
            const json& choice = payload.at("choices").at(0);
            response.content = choice.at("message").at("content").get<std::string>();
            if (choice.contains("logprobs") && !choice.at("logprobs").is_null()) {
                for (const json& item : choice.at("logprobs").at("content"))
                    response.logprobs.push_back(
                        {item.at("token").get<std::string>(), item.at("logprob").get<double>()});
            }
        } catch (const json::exception& e) {
            throw annotation_error(std::string("malformed completion: ") + e.what(), result->body);
        }
        return response;
    }
    throw io_error("request failed after " + std::to_string(config_.max_retries) +
                   " attempts: " + last_error);
}

ReplayBackend::ReplayBackend(std::string cache_dir, std::shared_ptr<LlmBackend> inner)
    : cache_dir_(std::move(cache_dir)), inner_(std::move(inner)) {
    std::filesystem::create_directories(cache_dir_);
}

std::string ReplayBackend::entry_path(const std::string& key) const {
    return cache_dir_ + "/" + key + ".json";
}

bool ReplayBackend::has(const ChatRequest& request) const {
    return std::filesystem::exists(entry_path(request_key(request)));
}

ChatResponse ReplayBackend::complete(const ChatRequest& request) {
    const std::string key = request_key(request);
    const std::string path = entry_path(key);
    {
        std::ifstream in(path, std::ios::binary);
        if (in) {
            json entry;
            try {
                in >> entry;
            } catch (const json::exception& e) {
                throw io_error("corrupt cache entry " + path + ": " + e.what());
            }
            ChatResponse response;
            response.content = entry.at("response").at("content").get<std::string>();
            for (const json& item : entry.at("response").at("logprobs"))
                response.logprobs.push_back(
                    {item.at("token").get<std::string>(), item.at("logprob").get<double>()});
            response.raw = entry.at("response").value("raw", std::string());
            return response;
        }
    }
    if (!inner_) throw not_found_error("no cached response for request " + key);
    ChatResponse response = inner_->complete(request);

    json logprobs = json::array();
    for (const TokenLogprob& lp : response.logprobs)
        logprobs.push_back({{"token", lp.token}, {"logprob", lp.logprob}});
    json entry{{"request", json::parse(canonical_request_json(request))},
               {"response",
                {{"content", response.content}, {"logprobs", logprobs}, {"raw", response.raw}}}};

    std::lock_guard<std::mutex> lock(mutex_);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw io_error("cannot write cache entry " + tmp);
        out << entry.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
    return response;
}

}  // namespace qmine::teacher
