#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qmine/corpus/types.hpp"
#include "qmine/harvester/cache.hpp"

namespace qmine::harvester {

struct HarvestSpec {
    std::vector<std::string> video_ids;
    corpus::SubjectTag subject = corpus::SubjectTag::biology;
    int max_videos = 1;
    int comments_per_video_cap = 1000;

    void validate() const;
};

struct ClientConfig {
    std::string api_base = "https://www.googleapis.com";
    std::string api_key_env = "VIDEO_API_KEY";
    std::string cache_dir = "cache/video";
    int max_retries = 3;
    int backoff_ms = 1000;       // doubled per retry
    int concurrency = 4;
    int min_request_interval_ms = 0;  // shared rate limiter, 0 disables
};

// Cache-first client for a Google-Data-API-shaped video platform. Network is
// touched only on cache misses; a warm cache needs no credentials.
class VideoApiClient {
public:
    explicit VideoApiClient(ClientConfig config);
    ~VideoApiClient();

    // Metadata without comments; the caller assigns the subject.
    corpus::VideoRecord fetch_video_metadata(const std::string& video_id);

    // Caption segments concatenated with single spaces, entities decoded.
    std::string fetch_transcript(const std::string& video_id);

    // Top-level comments in response order, retrieval_rank 1..n, at most cap.
    std::vector<corpus::CommentRecord> fetch_comments(const std::string& video_id, int cap = 1000);

    FileCache& cache() { return cache_; }
    int concurrency() const { return config_.concurrency; }

private:
    struct HttpResult {
        int status = 0;
        std::string body;
    };

    std::string api_key() const;
    void throttle();
    HttpResult perform(const std::string& path);
    std::string fetch_cached(const std::string& kind, const std::string& cache_id,
                             const std::string& path);

    ClientConfig config_;
    FileCache cache_;
    std::mutex throttle_mutex_;
    long long last_request_ms_ = 0;
};

// Bounded-concurrency harvest over spec.video_ids (first max_videos of them):
// metadata + transcript + capped comments per video. Comment ids are attached
// to their video records.
struct HarvestResult {
    std::vector<corpus::VideoRecord> videos;
    std::vector<corpus::CommentRecord> comments;
};

HarvestResult harvest(VideoApiClient& client, const HarvestSpec& spec);

}  // namespace qmine::harvester
