// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace rolemine {

enum class LexPos { kNone, kVerb, kNoun, kAdjective };

/// One word category: literal entries plus stem entries ("accompl*" matches
/// any token with "accompl" as a prefix). Entries are lowercase.
struct LexiconCategory {
  std::string key;        // full key, e.g. "anger" or "cogproc@pos=verb"
  std::string base_name;  // "anger" / "cogproc"
  LexPos pos = LexPos::kNone;
  std::unordered_set<std::string> words;
  std::vector<std::string> stems;  // stored without the trailing '*'

  bool matches(std::string_view lowercase_token) const;
};

/// Word-category lexicon. File format, one category per line:
///
///   category_name: word1, word2, stem3*
///   category_name@pos=verb: word1, ...
///
/// '#' starts a comment line. A duplicate category key is fatal; an empty
/// category loads as an empty set and is recorded as a warning.
class Lexicon {
 public:
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon parse(std::string_view content);

  const LexiconCategory* find(std::string_view key) const;
  bool has(std::string_view key) const { return find(key) != nullptr; }

  /// Categories in file order; tagging scans them in this order.
  const std::vector<LexiconCategory>& categories() const { return categories_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<LexiconCategory> categories_;
  std::vector<std::string> warnings_;
};

/// Fraction of tokens in `text` matching the category's entries; 0 for
/// token-free text. Throws std::invalid_argument for an unknown category.
double category_proportion(std::string_view text, const Lexicon& lexicon,
                           std::string_view category);

}  // namespace rolemine
