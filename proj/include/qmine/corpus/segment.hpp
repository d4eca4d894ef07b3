#pragma once

#include <string>
#include <vector>

namespace qmine::corpus {

// Splits cleaned text on sentence-final . ! ? followed by whitespace or end.
// Text with no boundary comes back as a single sentence; whitespace-only
// input yields no sentences.
std::vector<std::string> segment_sentences(const std::string& text);

}  // namespace qmine::corpus
