#include "readlab/utf8.hpp"

namespace readlab {

namespace {

// Returns the byte length of the UTF-8 sequence starting at text[pos],
// or 1 for an invalid lead/truncated sequence.
size_t sequence_length(const std::string& text, size_t pos) {
    unsigned char lead = static_cast<unsigned char>(text[pos]);
    size_t len = 1;
    if (lead >= 0xF0)
        len = 4;
    else if (lead >= 0xE0)
        len = 3;
    else if (lead >= 0xC0)
        len = 2;
    if (pos + len > text.size()) return 1;
    for (size_t i = 1; i < len; ++i) {
        unsigned char c = static_cast<unsigned char>(text[pos + i]);
        if ((c & 0xC0) != 0x80) return 1;
    }
    return len;
}

}  // namespace

std::vector<std::string> utf8_split(const std::string& text) {
    std::vector<std::string> units;
    units.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        size_t len = sequence_length(text, pos);
        units.push_back(text.substr(pos, len));
        pos += len;
    }
    return units;
}

size_t utf8_length(const std::string& text) {
    size_t count = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        pos += sequence_length(text, pos);
        ++count;
    }
    return count;
}

uint32_t utf8_first_codepoint(const std::string& unit) {
    if (unit.empty()) return 0;
    unsigned char lead = static_cast<unsigned char>(unit[0]);
    size_t len = sequence_length(unit, 0);
    if (len == 1) return lead;
    uint32_t cp = lead & (0x7F >> len);
    for (size_t i = 1; i < len; ++i)
        cp = (cp << 6) | (static_cast<unsigned char>(unit[i]) & 0x3F);
    return cp;
}

bool is_space_codepoint(uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
           cp == 0x00A0 || cp == 0x3000;
}

bool is_punct_codepoint(uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') || (cp >= '[' && cp <= '`') ||
               (cp >= '{' && cp <= '~');
    }
    // common CJK and general punctuation blocks
    return (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
           (cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
           (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) ||
           cp == 0x2018 || cp == 0x2019 || cp == 0x201C || cp == 0x201D;
}

bool is_sentence_terminal(uint32_t cp) {
    return cp == '.' || cp == '!' || cp == '?' || cp == 0x3002 /* 。 */ ||
           cp == 0xFF01 /* ！ */ || cp == 0xFF1F /* ？ */ || cp == 0x2026 /* … */ ||
           cp == 0xFF61 /* ｡ */;
}

}  // namespace readlab
