#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmine/btclass/level.hpp"

namespace qmine::corpus {

enum class SubjectTag { biology, chemistry, mathematics, physics, computer_science };

inline constexpr std::array<SubjectTag, 5> all_subjects = {
    SubjectTag::biology, SubjectTag::chemistry, SubjectTag::mathematics,
    SubjectTag::physics, SubjectTag::computer_science,
};

const char* subject_name(SubjectTag subject);
SubjectTag parse_subject(std::string_view name);  // throws input_error on unknown

struct VideoRecord {
    std::string video_id;
    SubjectTag subject = SubjectTag::biology;
    std::string title;
    std::string description;
    int64_t view_count = 0;
    int64_t like_count = 0;
    std::string transcript;
    std::vector<std::string> comment_ids;
};

struct CommentRecord {
    std::string comment_id;
    std::string video_id;
    std::string raw_text;
    std::string clean_text;
    int64_t like_count = 0;
    int64_t reply_count = 0;
    int retrieval_rank = 0;
};

struct QuestionRecord {
    std::string question_id;
    std::string comment_id;
    std::string video_id;
    SubjectTag subject = SubjectTag::biology;
    std::string text;
    double detection_prob = 0.0;
    int token_count = 0;
    std::optional<btclass::BTLevel> bt_label;
    std::optional<std::vector<double>> bt_probs;
};

struct FilterConfig {
    int comment_min_tokens = 3;
    int comment_max_tokens = 512;
    int question_min_tokens = 3;
    int question_max_tokens = 50;
    int comments_per_video_cap = 1000;

    void validate() const;  // throws config_error
};

struct Corpus {
    std::vector<VideoRecord> videos;
    std::vector<CommentRecord> comments;
    std::vector<QuestionRecord> questions;
};

struct StatsRow {
    SubjectTag subject = SubjectTag::biology;
    int64_t n_videos = 0;
    double avg_views = 0.0;
    double avg_likes = 0.0;
    double avg_comments = 0.0;
    double avg_transcript_tokens = 0.0;
    double avg_comment_tokens = 0.0;
    int64_t n_extracted_questions = 0;
};

using CorpusStats = std::vector<StatsRow>;

}  // namespace qmine::corpus
