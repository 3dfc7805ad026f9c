// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/text.hpp"

#include <cctype>

namespace rolemine {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80 || c == '_';
}

std::string normalize_quotes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2019 right single quote -> ASCII apostrophe.
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      out.push_back('\'');
      i += 2;
      continue;
    }
    // U+2026 ellipsis -> period.
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0xA6) {
      out.push_back('.');
      i += 2;
      continue;
    }
    out.push_back(text[i]);
  }
  return out;
}

}  // namespace

std::vector<RawToken> tokenize(std::string_view input) {
  const std::string text = normalize_quotes(input);
  std::vector<RawToken> tokens;
  std::string current;
  bool next_is_sentence_initial = true;

  const auto flush = [&]() {
    if (current.empty()) return;
    RawToken tok;
    tok.surface = current;
    tok.lower.reserve(current.size());
    for (unsigned char c : current)
      tok.lower.push_back(static_cast<char>(std::tolower(c)));
    tok.sentence_initial = next_is_sentence_initial;
    next_is_sentence_initial = false;
    tokens.push_back(std::move(tok));
    current.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(c));
      continue;
    }
    if (c == '\'' && !current.empty() && i + 1 < text.size() &&
        is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      current.push_back('\'');
      continue;
    }
    flush();
    if (c == '.' || c == '!' || c == '?') next_is_sentence_initial = true;
  }
  flush();
  return tokens;
}

}  // namespace rolemine
