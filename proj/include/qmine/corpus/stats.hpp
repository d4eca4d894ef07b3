#pragma once

#include <string>

#include "qmine/corpus/types.hpp"

namespace qmine::corpus {

// Per-subject means over that subject's videos, plus the surviving question
// count. Subjects without videos are omitted with a warning.
CorpusStats corpus_stats(const Corpus& corpus);

void write_stats_csv(const CorpusStats& stats, const std::string& path);

}  // namespace qmine::corpus
