#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmine/analysis/verbs.hpp"
#include "qmine/btclass/level.hpp"
#include "qmine/corpus/types.hpp"

namespace qmine::analysis {

// Presence pair: a lemma counts once per question.
struct VerbOccurrence {
    std::string lemma;
    btclass::BTLevel bt_class = btclass::BTLevel::knowledge;
    std::string question_id;
};

struct PMIEntry {
    std::string lemma;
    btclass::BTLevel bt_class = btclass::BTLevel::knowledge;
    double pmi = 0.0;
    int64_t collection_frequency = 0;
};

// One occurrence per (lemma, question); questions without a bt_label are
// skipped.
std::vector<VerbOccurrence> build_occurrences(const std::vector<corpus::QuestionRecord>& questions,
                                              const VerbTagger& tagger);

// PMI over joint (lemma, class) counts with natural log; lemmas whose
// collection frequency is below min_freq are excluded.
std::vector<PMIEntry> pmi_table(const std::vector<VerbOccurrence>& occurrences,
                                int64_t min_freq = 6);

// Per class, lemmas by (pmi desc, frequency desc, lemma asc), first n.
std::map<btclass::BTLevel, std::vector<std::string>> top_verbs(
    const std::vector<PMIEntry>& entries, size_t n = 10);

void write_pmi_csv(const std::vector<PMIEntry>& entries, const std::string& path);

}  // namespace qmine::analysis
