#pragma once

#include <vector>

#include "qmine/corpus/types.hpp"

namespace qmine::corpus {

// First min(len, cap) records in retrieval order. Throws config_error when
// cap < 1. Input must already be sorted by retrieval_rank ascending.
std::vector<CommentRecord> cap_comments(const std::vector<CommentRecord>& comments, int cap);

// Keeps comments whose clean_text whitespace-token count lies within the
// configured bounds; order preserved.
std::vector<CommentRecord> filter_comments(const std::vector<CommentRecord>& comments,
                                           const FilterConfig& cfg);

}  // namespace qmine::corpus
