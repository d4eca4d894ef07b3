#include "qmine/corpus/filters.hpp"

#include "qmine/common/errors.hpp"
#include "qmine/common/text.hpp"

namespace qmine::corpus {

std::vector<CommentRecord> cap_comments(const std::vector<CommentRecord>& comments, int cap) {
    if (cap < 1) throw config_error("comment cap must be >= 1");
    size_t keep = std::min(comments.size(), static_cast<size_t>(cap));
    return std::vector<CommentRecord>(comments.begin(), comments.begin() + keep);
}

std::vector<CommentRecord> filter_comments(const std::vector<CommentRecord>& comments,
                                           const FilterConfig& cfg) {
    cfg.validate();
    std::vector<CommentRecord> kept;
    kept.reserve(comments.size());
    for (const CommentRecord& comment : comments) {
        int n = static_cast<int>(text::count_whitespace_tokens(comment.clean_text));
        if (n >= cfg.comment_min_tokens && n <= cfg.comment_max_tokens) kept.push_back(comment);
    }
    return kept;
}

}  // namespace qmine::corpus
