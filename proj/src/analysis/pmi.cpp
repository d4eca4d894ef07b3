#include "qmine/analysis/pmi.hpp"

#include <algorithm>
#include <cmath>

#include "qmine/common/csv.hpp"
#include "qmine/common/errors.hpp"

namespace qmine::analysis {

std::vector<VerbOccurrence> build_occurrences(const std::vector<corpus::QuestionRecord>& questions,
                                              const VerbTagger& tagger) {
    std::vector<VerbOccurrence> occurrences;
    for (const corpus::QuestionRecord& question : questions) {
        if (!question.bt_label || question.text.empty()) continue;
        for (std::string& lemma : extract_verbs(question.text, tagger))
            occurrences.push_back({std::move(lemma), *question.bt_label, question.question_id});
    }
    return occurrences;
}

std::vector<PMIEntry> pmi_table(const std::vector<VerbOccurrence>& occurrences, int64_t min_freq) {
    if (occurrences.empty()) throw input_error("pmi_table requires occurrences");
    std::map<std::pair<std::string, btclass::BTLevel>, int64_t> joint;
    std::map<std::string, int64_t> verb_count;
    std::map<btclass::BTLevel, int64_t> class_count;
    for (const VerbOccurrence& occ : occurrences) {
        joint[{occ.lemma, occ.bt_class}] += 1;
        verb_count[occ.lemma] += 1;
        class_count[occ.bt_class] += 1;
    }
    const double total = static_cast<double>(occurrences.size());

    std::vector<PMIEntry> entries;
    for (const auto& [key, n_joint] : joint) {
        const auto& [lemma, bt_class] = key;
        int64_t n_verb = verb_count[lemma];
        if (n_verb < min_freq) continue;
        double p_joint = static_cast<double>(n_joint) / total;
        double p_verb = static_cast<double>(n_verb) / total;
        double p_class = static_cast<double>(class_count[bt_class]) / total;
        PMIEntry entry;
        entry.lemma = lemma;
        entry.bt_class = bt_class;
        entry.pmi = std::log(p_joint / (p_verb * p_class));
        entry.collection_frequency = n_verb;
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(), [](const PMIEntry& a, const PMIEntry& b) {
        if (a.bt_class != b.bt_class) return a.bt_class < b.bt_class;
        if (a.pmi != b.pmi) return a.pmi > b.pmi;
        if (a.collection_frequency != b.collection_frequency)
            return a.collection_frequency > b.collection_frequency;
        return a.lemma < b.lemma;
    });
    return entries;
}

std::map<btclass::BTLevel, std::vector<std::string>> top_verbs(
    const std::vector<PMIEntry>& entries, size_t n) {
    // Entries arrive sorted by pmi_table; re-sort locally so any entry list works.
    std::map<btclass::BTLevel, std::vector<const PMIEntry*>> grouped;
    for (const PMIEntry& entry : entries) grouped[entry.bt_class].push_back(&entry);
    std::map<btclass::BTLevel, std::vector<std::string>> top;
    for (auto& [bt_class, list] : grouped) {
        std::sort(list.begin(), list.end(), [](const PMIEntry* a, const PMIEntry* b) {
            if (a->pmi != b->pmi) return a->pmi > b->pmi;
            if (a->collection_frequency != b->collection_frequency)
                return a->collection_frequency > b->collection_frequency;
            return a->lemma < b->lemma;
        });
        std::vector<std::string>& lemmas = top[bt_class];
        for (size_t i = 0; i < list.size() && i < n; ++i) lemmas.push_back(list[i]->lemma);
    }
    return top;
}

void write_pmi_csv(const std::vector<PMIEntry>& entries, const std::string& path) {
    csv::Writer writer(path);
    writer.write_row({"lemma", "class", "pmi", "freq"});
    for (const PMIEntry& entry : entries) {
        writer.write_row({entry.lemma, btclass::bt_level_name(entry.bt_class),
                          csv::format_double(entry.pmi),
                          std::to_string(entry.collection_frequency)});
    }
    writer.close();
}

}  // namespace qmine::analysis
