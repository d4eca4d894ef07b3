#include "qmine/corpus/types.hpp"

#include "qmine/common/errors.hpp"

namespace qmine::corpus {

const char* subject_name(SubjectTag subject) {
    switch (subject) {
        case SubjectTag::biology: return "biology";
        case SubjectTag::chemistry: return "chemistry";
        case SubjectTag::mathematics: return "mathematics";
        case SubjectTag::physics: return "physics";
        case SubjectTag::computer_science: return "computer_science";
    }
    return "unknown";
}

SubjectTag parse_subject(std::string_view name) {
    for (SubjectTag subject : all_subjects)
        if (name == subject_name(subject)) return subject;
    throw input_error("unknown subject: " + std::string(name));
}

void FilterConfig::validate() const {
    if (comment_min_tokens < 1 || question_min_tokens < 1)
        throw config_error("token minimums must be >= 1");
    if (comment_min_tokens > comment_max_tokens)
        throw config_error("comment_min_tokens exceeds comment_max_tokens");
    if (question_min_tokens > question_max_tokens)
        throw config_error("question_min_tokens exceeds question_max_tokens");
    if (comments_per_video_cap < 1)
        throw config_error("comments_per_video_cap must be >= 1");
}

}  // namespace qmine::corpus
