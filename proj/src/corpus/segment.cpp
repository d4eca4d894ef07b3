#include "qmine/corpus/segment.hpp"

#include "qmine/common/text.hpp"

namespace qmine::corpus {

namespace {

bool is_terminal(char c) {
    return c == '.' || c == '!' || c == '?';
}

}  // namespace

std::vector<std::string> segment_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        if (!is_terminal(text[i])) continue;
        // Runs like "?!" or "..." end at their last mark.
        if (i + 1 < text.size() && !text::is_ascii_space(text[i + 1])) continue;
        std::string sentence = text::trim(text.substr(start, i + 1 - start));
        if (!sentence.empty()) sentences.push_back(std::move(sentence));
        start = i + 1;
    }
    if (start < text.size()) {
        std::string tail = text::trim(text.substr(start));
        if (!tail.empty()) sentences.push_back(std::move(tail));
    }
    return sentences;
}

}  // namespace qmine::corpus
