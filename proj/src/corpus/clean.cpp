#include "qmine/corpus/clean.hpp"

#include <string_view>

#include "qmine/common/text.hpp"

namespace qmine::corpus {

bool is_emoji_codepoint(uint32_t cp) {
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return true;  // pictographs, emoticons, symbols
    if (cp >= 0x2600 && cp <= 0x27BF) return true;    // misc symbols, dingbats
    if (cp >= 0xFE00 && cp <= 0xFE0F) return true;    // variation selectors
    if (cp == 0x200D || cp == 0x20E3) return true;    // ZWJ, combining keycap
    if (cp >= 0x2B1B && cp <= 0x2B1C) return true;
    if (cp == 0x2B50 || cp == 0x2B55) return true;
    return false;
}

namespace {

bool is_url_token(std::string_view token, size_t* url_pos) {
    size_t pos = token.find("http://");
    size_t pos2 = token.find("https://");
    if (pos2 < pos) pos = pos2;
    if (pos != std::string_view::npos) {
        *url_pos = pos;
        return true;
    }
    return false;
}

std::string strip_emoji(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    size_t i = 0;
    while (i < token.size()) {
        size_t len = 0;
        uint32_t cp = text::decode_utf8(token, i, &len);
        if (!is_emoji_codepoint(cp)) out.append(token.substr(i, len));
        i += len;
    }
    return out;
}

}  // namespace

std::string clean_comment(const std::string& raw_text) {
    std::string out;
    out.reserve(raw_text.size());
    for (std::string_view raw_token : text::whitespace_tokens(raw_text)) {
        // Emoji first, so a mention or URL is still recognized when an emoji
        // is glued to its front.
        std::string token = strip_emoji(raw_token);
        if (token.empty() || token.front() == '@') continue;
        if (text::starts_with_icase(token, "www.")) continue;
        size_t url_pos = 0;
        if (is_url_token(token, &url_pos)) token.resize(url_pos);
        if (token.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

}  // namespace qmine::corpus
