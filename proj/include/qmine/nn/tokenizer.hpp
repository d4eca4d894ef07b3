#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace qmine::nn {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;

// Lowercased word-level tokenizer: alphanumeric runs are words, ASCII
// punctuation marks are single-character tokens (so '?' is visible to the
// models), non-ASCII sequences stay glued to their word.
class WordTokenizer {
public:
    static std::vector<std::string> split(const std::string& input);

    void build(const std::vector<std::string>& texts, size_t max_size = 8000, int min_count = 1);

    std::vector<int> encode(const std::string& input, int max_len) const;

    size_t size() const { return tokens_.size(); }
    const std::string& token(int id) const { return tokens_[id]; }

    void save(const std::string& path) const;
    static WordTokenizer load(const std::string& path);

private:
    std::unordered_map<std::string, int> vocab_;
    std::vector<std::string> tokens_;
};

}  // namespace qmine::nn
