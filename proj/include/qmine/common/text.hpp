#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmine::text {

// Decodes one UTF-8 sequence starting at `pos`. Writes the codepoint and the
// number of bytes consumed. Invalid bytes decode as themselves (1 byte), so
// iteration always makes progress.
uint32_t decode_utf8(std::string_view s, size_t pos, size_t* len);

// Appends the UTF-8 encoding of `cp` to `out`.
void append_utf8(std::string& out, uint32_t cp);

bool is_ascii_space(char c);

// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string_view> whitespace_tokens(std::string_view s);

size_t count_whitespace_tokens(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::string trim(std::string_view s);

// Collapses any run of whitespace to a single space and trims the ends.
std::string collapse_whitespace(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace qmine::text
