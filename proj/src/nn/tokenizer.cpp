#include "qmine/nn/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "qmine/common/errors.hpp"

namespace qmine::nn {

namespace {

bool is_word_byte(unsigned char c) {
    return std::isalnum(c) || c >= 0x80 || c == '\'';
}

}  // namespace

std::vector<std::string> WordTokenizer::split(const std::string& input) {
    std::vector<std::string> out;
    std::string word;
    auto flush = [&]() {
        if (!word.empty()) {
            out.push_back(word);
            word.clear();
        }
    };
    for (unsigned char c : input) {
        if (is_word_byte(c)) {
            word.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
            if (!std::isspace(c)) out.push_back(std::string(1, static_cast<char>(c)));
        }
    }
    flush();
    return out;
}

void WordTokenizer::build(const std::vector<std::string>& texts, size_t max_size, int min_count) {
    if (max_size < 3) throw config_error("vocab size must be >= 3");
    std::unordered_map<std::string, int64_t> counts;
    for (const std::string& input : texts)
        for (std::string& token : split(input)) counts[token] += 1;

    std::vector<std::pair<std::string, int64_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    vocab_.clear();
    tokens_ = {"<pad>", "<unk>"};
    for (const auto& [token, count] : sorted) {
        if (count < min_count || tokens_.size() >= max_size) break;
        vocab_[token] = static_cast<int>(tokens_.size());
        tokens_.push_back(token);
    }
}

std::vector<int> WordTokenizer::encode(const std::string& input, int max_len) const {
    std::vector<int> ids;
    for (const std::string& token : split(input)) {
        if (static_cast<int>(ids.size()) >= max_len) break;
        auto it = vocab_.find(token);
        ids.push_back(it == vocab_.end() ? kUnkId : it->second);
    }
    return ids;
}

void WordTokenizer::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write vocab file " + path);
    for (const std::string& token : tokens_) out << token << "\n";
    if (!out) throw io_error("write failed: " + path);
}

WordTokenizer WordTokenizer::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open vocab file " + path);
    WordTokenizer tokenizer;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        tokenizer.tokens_.push_back(line);
    }
    if (tokenizer.tokens_.size() < 2 || tokenizer.tokens_[0] != "<pad>" ||
        tokenizer.tokens_[1] != "<unk>")
        throw io_error("malformed vocab file " + path);
    for (size_t i = 2; i < tokenizer.tokens_.size(); ++i)
        tokenizer.vocab_[tokenizer.tokens_[i]] = static_cast<int>(i);
    return tokenizer;
}

}  // namespace qmine::nn
