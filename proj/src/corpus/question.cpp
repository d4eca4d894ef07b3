#include "qmine/corpus/question.hpp"

#include <cstdio>

#include "qmine/common/text.hpp"

namespace qmine::corpus {

namespace {

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::string make_question_id(const std::string& comment_id, int sentence_index) {
    uint64_t h = fnv1a64(comment_id + "#" + std::to_string(sentence_index));
    char buf[20];
    std::snprintf(buf, sizeof(buf), "q%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<QuestionRecord> make_question_records(const std::vector<SentenceCandidate>& sentences,
                                                  const FilterConfig& cfg, double threshold) {
    cfg.validate();
    std::vector<QuestionRecord> records;
    for (const SentenceCandidate& cand : sentences) {
        if (cand.detection_prob < threshold) continue;
        int n = static_cast<int>(text::count_whitespace_tokens(cand.text));
        if (n < cfg.question_min_tokens || n > cfg.question_max_tokens) continue;
        QuestionRecord record;
        record.question_id = make_question_id(cand.comment_id, cand.sentence_index);
        record.comment_id = cand.comment_id;
        record.video_id = cand.video_id;
        record.subject = cand.subject;
        record.text = cand.text;
        record.detection_prob = cand.detection_prob;
        record.token_count = n;
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace qmine::corpus
