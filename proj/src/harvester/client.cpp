#include "qmine/harvester/client.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"
#include "qmine/common/log.hpp"

namespace qmine::harvester {

using jsonl::json;

namespace {

int64_t count_field(const json& node, const char* name) {
    if (!node.contains(name)) return 0;
    const json& v = node.at(name);
    if (v.is_string()) return std::stoll(v.get<std::string>());
    return v.get<int64_t>();
}

std::string decode_xml_entities(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        size_t semi = s.find(';', i);
        if (semi == std::string::npos || semi - i > 10) {
            out.push_back(s[i++]);
            continue;
        }
        std::string entity = s.substr(i + 1, semi - i - 1);
        if (entity == "amp") out.push_back('&');
        else if (entity == "lt") out.push_back('<');
        else if (entity == "gt") out.push_back('>');
        else if (entity == "quot") out.push_back('"');
        else if (entity == "apos") out.push_back('\'');
        else if (!entity.empty() && entity[0] == '#') {
            long code = 0;
            if (entity.size() > 2 && (entity[1] == 'x' || entity[1] == 'X'))
                code = std::strtol(entity.c_str() + 2, nullptr, 16);
            else
                code = std::strtol(entity.c_str() + 1, nullptr, 10);
            if (code > 0 && code < 128) out.push_back(static_cast<char>(code));
            else if (code >= 128) {
                // re-encode the code point as UTF-8
                unsigned cp = static_cast<unsigned>(code);
                if (cp < 0x800) {
                    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                } else if (cp < 0x10000) {
                    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                } else {
                    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                }
            }
        } else {
            // unknown entity, keep literally
            out.append(s, i, semi - i + 1);
        }
        i = semi + 1;
    }
    return out;
}

// True when the payload is a Data-API error envelope with the given reason.
bool error_reason_is(const std::string& body, const char* reason) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.contains("error")) return false;
    const json& err = j.at("error");
    if (!err.contains("errors")) return false;
    for (const json& item : err.at("errors"))
        if (item.value("reason", "") == reason) return true;
    return false;
}

bool is_error_envelope(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    return !j.is_discarded() && j.is_object() && j.contains("error");
}

long long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

void HarvestSpec::validate() const {
    if (max_videos < 1) throw config_error("max_videos must be at least 1");
    if (comments_per_video_cap < 1) throw config_error("comment cap must be at least 1");
}

VideoApiClient::VideoApiClient(ClientConfig config)
    : config_(std::move(config)), cache_(config_.cache_dir) {
    if (config_.max_retries < 1) throw config_error("max_retries must be at least 1");
    if (config_.concurrency < 1) throw config_error("concurrency must be at least 1");
}

VideoApiClient::~VideoApiClient() = default;

std::string VideoApiClient::api_key() const {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key)
        throw credential_error("missing API key: set " + config_.api_key_env);
    return key;
}

void VideoApiClient::throttle() {
    if (config_.min_request_interval_ms <= 0) return;
    long long wait = 0;
    {
        std::lock_guard<std::mutex> lock(throttle_mutex_);
        long long now = now_ms();
        long long earliest = last_request_ms_ + config_.min_request_interval_ms;
        wait = earliest > now ? earliest - now : 0;
        last_request_ms_ = now + wait;
    }
    if (wait > 0) std::this_thread::sleep_for(std::chrono::milliseconds(wait));
}

VideoApiClient::HttpResult VideoApiClient::perform(const std::string& path) {
    httplib::Client client(config_.api_base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);
    for (int attempt = 0; attempt < config_.max_retries; ++attempt) {
        throttle();
        httplib::Result res = client.Get(path);
        bool last = attempt == config_.max_retries - 1;
        if (!res) {
            if (last) throw io_error("transport failure talking to " + config_.api_base);
        } else if (res->status == 429) {
            if (last) throw rate_limit_error("rate limited after " +
                                             std::to_string(config_.max_retries) + " attempts");
        } else if (res->status >= 500) {
            if (last) throw io_error("server error " + std::to_string(res->status));
        } else {
            return {res->status, res->body};
        }
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<long long>(config_.backoff_ms) << attempt));
    }
    throw io_error("unreachable retry state");
}

std::string VideoApiClient::fetch_cached(const std::string& kind, const std::string& cache_id,
                                         const std::string& path) {
    if (std::optional<std::string> hit = cache_.get(kind, cache_id)) return *hit;
    std::string key = api_key();
    std::string full = path + (path.find('?') == std::string::npos ? "?" : "&") + "key=" + key;
    HttpResult res = perform(full);
    switch (res.status) {
        case 200:
            cache_.put(kind, cache_id, res.body);
            return res.body;
        case 401:
            throw credential_error("authentication rejected (401)");
        case 403:
            if (error_reason_is(res.body, "commentsDisabled")) {
                // cached so warm replays reproduce the empty result offline
                cache_.put(kind, cache_id, res.body);
                return res.body;
            }
            throw credential_error("access forbidden (403)");
        case 404:
            throw not_found_error("resource not found: " + cache_id);
        default:
            throw io_error("unexpected status " + std::to_string(res.status) + " for " +
                           cache_id);
    }
}

corpus::VideoRecord VideoApiClient::fetch_video_metadata(const std::string& video_id) {
    std::string body = fetch_cached(
        "video", video_id, "/youtube/v3/videos?part=snippet%2Cstatistics&id=" + video_id);
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw io_error("unparseable metadata for " + video_id);
    if (!j.contains("items") || j.at("items").empty())
        throw not_found_error("video not found: " + video_id);
    const json& item = j.at("items")[0];
    corpus::VideoRecord video;
    video.video_id = item.value("id", video_id);
    if (item.contains("snippet")) {
        const json& snippet = item.at("snippet");
        video.title = snippet.value("title", "");
        video.description = snippet.value("description", "");
    }
    if (item.contains("statistics")) {
        const json& stats = item.at("statistics");
        video.view_count = count_field(stats, "viewCount");
        video.like_count = count_field(stats, "likeCount");
    }
    return video;
}

std::string VideoApiClient::fetch_transcript(const std::string& video_id) {
    std::string body = fetch_cached("transcript", video_id, "/timedtext?lang=en&v=" + video_id);
    std::string out;
    size_t pos = 0;
    while (true) {
        size_t open = body.find("<text", pos);
        if (open == std::string::npos) break;
        size_t gt = body.find('>', open);
        if (gt == std::string::npos) break;
        size_t close = body.find("</text>", gt);
        if (close == std::string::npos) break;
        std::string segment = decode_xml_entities(body.substr(gt + 1, close - gt - 1));
        size_t begin = segment.find_first_not_of(" \t\r\n");
        size_t end = segment.find_last_not_of(" \t\r\n");
        if (begin != std::string::npos) {
            if (!out.empty()) out.push_back(' ');
            out.append(segment, begin, end - begin + 1);
        }
        pos = close + 7;
    }
    if (out.empty()) throw not_found_error("no captions for " + video_id);
    return out;
}

std::vector<corpus::CommentRecord> VideoApiClient::fetch_comments(const std::string& video_id,
                                                                  int cap) {
    if (cap < 1) throw config_error("comment cap must be at least 1");
    std::vector<corpus::CommentRecord> comments;
    std::string page_token;
    for (int page = 1; static_cast<int>(comments.size()) < cap; ++page) {
        std::string path = "/youtube/v3/commentThreads?part=snippet&maxResults=100&videoId=" +
                           video_id;
        if (!page_token.empty()) path += "&pageToken=" + page_token;
        std::string body =
            fetch_cached("comments", video_id + "#page" + std::to_string(page), path);
        if (is_error_envelope(body)) {
            if (error_reason_is(body, "commentsDisabled")) {
                log_warn("harvester", "comments disabled for " + video_id);
                return {};
            }
            throw io_error("error payload for comments of " + video_id);
        }
        json j = json::parse(body, nullptr, false);
        if (j.is_discarded()) throw io_error("unparseable comments for " + video_id);
        for (const json& item : j.value("items", json::array())) {
            if (static_cast<int>(comments.size()) >= cap) break;
            corpus::CommentRecord comment;
            comment.video_id = video_id;
            const json* snippet = nullptr;
            if (item.contains("snippet") && item.at("snippet").contains("topLevelComment")) {
                const json& top = item.at("snippet").at("topLevelComment");
                comment.comment_id = top.value("id", "");
                if (top.contains("snippet")) snippet = &top.at("snippet");
                comment.reply_count = count_field(item.at("snippet"), "totalReplyCount");
            }
            if (comment.comment_id.empty()) comment.comment_id = item.value("id", "");
            if (snippet) {
                if (snippet->contains("textOriginal"))
                    comment.raw_text = snippet->at("textOriginal").get<std::string>();
                else
                    comment.raw_text = snippet->value("textDisplay", "");
                comment.like_count = count_field(*snippet, "likeCount");
            }
            comment.retrieval_rank = static_cast<int>(comments.size()) + 1;
            comments.push_back(std::move(comment));
        }
        if (!j.is_discarded() && j.contains("nextPageToken"))
            page_token = j.at("nextPageToken").get<std::string>();
        else
            break;
    }
    return comments;
}

HarvestResult harvest(VideoApiClient& client, const HarvestSpec& spec) {
    spec.validate();
    size_t n = std::min(spec.video_ids.size(), static_cast<size_t>(spec.max_videos));
    std::vector<corpus::VideoRecord> videos(n);
    std::vector<std::vector<corpus::CommentRecord>> per_video(n);

    std::atomic<size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                corpus::VideoRecord video = client.fetch_video_metadata(spec.video_ids[i]);
                video.subject = spec.subject;
                try {
                    video.transcript = client.fetch_transcript(spec.video_ids[i]);
                } catch (const not_found_error&) {
                    log_warn("harvester", "no transcript for " + spec.video_ids[i]);
                }
                per_video[i] =
                    client.fetch_comments(spec.video_ids[i], spec.comments_per_video_cap);
                for (const corpus::CommentRecord& comment : per_video[i])
                    video.comment_ids.push_back(comment.comment_id);
                videos[i] = std::move(video);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    size_t n_threads = std::min(static_cast<size_t>(client.concurrency()), n);
    std::vector<std::thread> threads;
    for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);

    HarvestResult result;
    result.videos = std::move(videos);
    for (std::vector<corpus::CommentRecord>& comments : per_video)
        for (corpus::CommentRecord& comment : comments)
            result.comments.push_back(std::move(comment));
    return result;
}

}  // namespace qmine::harvester
