#pragma once

#include <string>
#include <vector>

#include "qmine/corpus/types.hpp"

namespace qmine::corpus {

void save_videos(const std::vector<VideoRecord>& videos, const std::string& path);
void save_comments(const std::vector<CommentRecord>& comments, const std::string& path);
void save_questions(const std::vector<QuestionRecord>& questions, const std::string& path);

std::vector<VideoRecord> load_videos(const std::string& path);
std::vector<CommentRecord> load_comments(const std::string& path);
std::vector<QuestionRecord> load_questions(const std::string& path);

// Reads videos.jsonl and comments.jsonl (questions.jsonl too when present)
// from a corpus directory.
Corpus load_corpus(const std::string& dir);
void save_corpus(const Corpus& corpus, const std::string& dir);

}  // namespace qmine::corpus
