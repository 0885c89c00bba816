#include "jurisrank/tokenizer.hpp"

#include <cstdint>

namespace jurisrank {

namespace {

// Decodes one UTF-8 sequence at `i`; invalid bytes decode to U+FFFD with width 1.
std::uint32_t next_codepoint(std::string_view s, std::size_t i, std::size_t& width) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto byte = [&](std::size_t k) { return static_cast<std::uint32_t>(s[i + k] & 0x3F); };
  if (b0 < 0x80) {
    width = 1;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    width = 2;
    return ((b0 & 0x1Fu) << 6) | byte(1);
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    width = 3;
    return ((b0 & 0x0Fu) << 12) | (byte(1) << 6) | byte(2);
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    width = 4;
    return ((b0 & 0x07u) << 18) | (byte(1) << 12) | (byte(2) << 6) | byte(3);
  }
  width = 1;
  return 0xFFFD;
}

bool is_word_codepoint(std::uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7) return false;     // Latin-1 symbols
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;               // punctuation, symbols
  if (cp >= 0x3000 && cp <= 0x303F) return false;               // CJK punctuation
  if (cp == 0xFEFF || cp == 0xFFFD || (cp >= 0xFF00 && cp <= 0xFF0F)) return false;
  return true;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t width = 1;
    std::uint32_t cp = next_codepoint(text, i, width);
    if (is_word_codepoint(cp)) {
      if (cp >= 'A' && cp <= 'Z') {
        current += static_cast<char>(cp + 32);
      } else if (cp >= 0xC0 && cp <= 0xDE) {
        const std::uint32_t lower = cp + 0x20;
        current += static_cast<char>(0xC0 | (lower >> 6));
        current += static_cast<char>(0x80 | (lower & 0x3F));
      } else {
        current.append(text.substr(i, width));
      }
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
    i += width;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace jurisrank
