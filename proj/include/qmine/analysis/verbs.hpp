#pragma once

#include <memory>
#include <string>
#include <vector>

namespace qmine::analysis {

class VerbTagger {
public:
    virtual ~VerbTagger() = default;
    virtual const char* name() const = 0;
    // Lowercase verb lemmas in occurrence order, duplicates included.
    virtual std::vector<std::string> verb_lemmas(const std::string& text) const = 0;
};

// Deterministic lexicon-and-suffix tagger; golden outputs change only when
// its name is bumped.
std::unique_ptr<VerbTagger> make_rule_tagger();

// Lemmas via the given tagger with duplicates collapsed (presence counting),
// first-occurrence order. Throws input_error on empty text; a tagger failure
// yields an empty list with a warning.
std::vector<std::string> extract_verbs(const std::string& text, const VerbTagger& tagger);
std::vector<std::string> extract_verbs(const std::string& text);  // default tagger

}  // namespace qmine::analysis
