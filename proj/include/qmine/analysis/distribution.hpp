#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmine/btclass/level.hpp"
#include "qmine/corpus/types.hpp"

namespace qmine::analysis {

struct DistributionRow {
    corpus::SubjectTag subject = corpus::SubjectTag::biology;
    std::map<btclass::BTLevel, double> proportions;
    int64_t n_questions = 0;
};

struct EngagementRow {
    btclass::BTLevel bt_class = btclass::BTLevel::knowledge;
    double mean_like_rate = 0.0;
    double mean_reply_rate = 0.0;
    int64_t n_questions = 0;
};

// Per-subject class proportions over labeled questions. With
// include_irrelevant false, Irrelevant questions are dropped and proportions
// renormalize over the six BT classes. Subjects with no labeled questions are
// omitted with a warning.
std::vector<DistributionRow> bt_distribution(const std::vector<corpus::QuestionRecord>& questions,
                                             bool include_irrelevant);

// Like/reply counts normalized by the host video's view count, averaged per
// BT class. Questions on zero-view videos are excluded with a count warning.
std::vector<EngagementRow> engagement_rates(const std::vector<corpus::QuestionRecord>& questions,
                                            const std::vector<corpus::CommentRecord>& comments,
                                            const std::vector<corpus::VideoRecord>& videos);

void write_distribution_csv(const std::vector<DistributionRow>& rows, const std::string& path);
void write_engagement_csv(const std::vector<EngagementRow>& rows, const std::string& path);

}  // namespace qmine::analysis
