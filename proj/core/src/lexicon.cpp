// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/lexicon.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rolemine/io.hpp"
#include "rolemine/text.hpp"

namespace rolemine {

bool LexiconCategory::matches(std::string_view lowercase_token) const {
  if (words.count(std::string(lowercase_token))) return true;
  for (const std::string& stem : stems) {
    if (lowercase_token.size() >= stem.size() &&
        lowercase_token.compare(0, stem.size(), stem) == 0)
      return true;
  }
  return false;
}

Lexicon Lexicon::parse(std::string_view content) {
  Lexicon lexicon;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t colon = stripped.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected 'category: word, word, ...'");

    LexiconCategory category;
    category.key = to_lower(trim(stripped.substr(0, colon)));
    if (category.key.empty())
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": empty category name");
    const std::size_t at = category.key.find("@pos=");
    if (at == std::string::npos) {
      category.base_name = category.key;
    } else {
      category.base_name = category.key.substr(0, at);
      const std::string pos = category.key.substr(at + 5);
      if (pos == "verb")
        category.pos = LexPos::kVerb;
      else if (pos == "noun")
        category.pos = LexPos::kNoun;
      else if (pos == "adj")
        category.pos = LexPos::kAdjective;
      else
        throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                 ": unknown pos '" + pos + "'");
    }
    for (const auto& existing : lexicon.categories_) {
      if (existing.key == category.key)
        throw std::runtime_error("duplicate lexicon category: " + category.key);
    }

    for (const std::string& raw : split_trimmed(stripped.substr(colon + 1), ',')) {
      if (raw.empty()) continue;
      const std::string entry = to_lower(raw);
      if (entry.back() == '*') {
        const std::string stem = entry.substr(0, entry.size() - 1);
        if (stem.empty())
          throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                   ": bare '*' entry");
        category.stems.push_back(stem);
      } else {
        category.words.insert(entry);
      }
    }
    if (category.words.empty() && category.stems.empty())
      lexicon.warnings_.push_back("category '" + category.key + "' is empty");
    lexicon.categories_.push_back(std::move(category));
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const LexiconCategory* Lexicon::find(std::string_view key) const {
  for (const auto& category : categories_) {
    if (category.key == key) return &category;
  }
  return nullptr;
}

double category_proportion(std::string_view text, const Lexicon& lexicon,
                           std::string_view category) {
  const LexiconCategory* cat = lexicon.find(category);
  if (!cat)
    throw std::invalid_argument("unknown lexicon category: " + std::string(category));
  const std::vector<RawToken> tokens = tokenize(text);
  if (tokens.empty()) return 0.0;
  std::size_t matches = 0;
  for (const RawToken& token : tokens) {
    if (cat->matches(token.lower)) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(tokens.size());
}

}  // namespace rolemine
