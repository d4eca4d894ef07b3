#pragma once

#include <cstdint>
#include <string>

namespace qmine::corpus {

// Strips URLs, @-mention tokens, and emoji codepoints; collapses whitespace.
// Idempotent; the result is never longer than the input.
std::string clean_comment(const std::string& raw_text);

bool is_emoji_codepoint(uint32_t cp);

}  // namespace qmine::corpus
