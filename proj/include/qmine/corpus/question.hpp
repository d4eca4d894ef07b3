#pragma once

#include <string>
#include <vector>

#include "qmine/corpus/types.hpp"

namespace qmine::corpus {

// One detector-scored sentence with its provenance.
struct SentenceCandidate {
    std::string text;
    double detection_prob = 0.0;
    std::string comment_id;
    std::string video_id;
    SubjectTag subject = SubjectTag::biology;
    int sentence_index = 0;
};

// Stable id derived from (comment_id, sentence index); re-runs reproduce it.
std::string make_question_id(const std::string& comment_id, int sentence_index);

// Keeps candidates with detection_prob >= threshold and a token count within
// the question bounds.
std::vector<QuestionRecord> make_question_records(const std::vector<SentenceCandidate>& sentences,
                                                  const FilterConfig& cfg, double threshold);

}  // namespace qmine::corpus
