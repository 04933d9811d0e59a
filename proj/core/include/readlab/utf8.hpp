#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace readlab {

// Minimal UTF-8 handling: the feature extractors count "characters" as code
// points. Invalid bytes are passed through as single-byte units rather than
// rejected, so dirty corpora still extract.

std::vector<std::string> utf8_split(const std::string& text);
size_t utf8_length(const std::string& text);
uint32_t utf8_first_codepoint(const std::string& unit);

bool is_space_codepoint(uint32_t cp);
bool is_punct_codepoint(uint32_t cp);
bool is_sentence_terminal(uint32_t cp);

}  // namespace readlab
