// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rolemine/lexicon.hpp"

namespace rolemine {

enum class TokenTag {
  kNegation,
  kModalVerb,
  kAuxiliaryVerb,
  kPronounFirstSubjective,
  kPronounFirstPossessive,
  kPronounSecond,
  kPronounThird,
  kLexVerb,
  kLexNoun,
  kLexAdjective,
  kAdverb,
  kProperNoun,
  kPlain,
};

std::string_view token_tag_name(TokenTag tag);

struct TaggedToken {
  std::string surface;
  std::string lower;
  TokenTag tag = TokenTag::kPlain;
  std::string category;  // base category for lexicon tags, else empty
  bool sentence_initial = false;
};

using TokenStream = std::vector<TaggedToken>;

/// Tokenizes and assigns exactly one tag per token. Priority when several
/// classes apply: negation > modal > auxiliary > pronoun classes > lexicon
/// POS classes (verb > noun > adjective, categories in file order) >
/// adverb > proper noun > plain. A capitalized sentence-initial token counts
/// as a proper noun unless it is a common function word.
TokenStream tokenize_and_tag(std::string_view text, const Lexicon& lexicon);

/// One pattern slot. Tag slots and word slots consume exactly one token;
/// gap slots consume 0..max_gap arbitrary tokens.
struct Slot {
  enum class Kind { kTag, kWords, kGap };
  Kind kind = Kind::kTag;
  TokenTag tag = TokenTag::kPlain;
  std::string category;             // required category for lexicon tags
  std::set<std::string> words;      // lowercase alternatives
  int max_gap = 0;
};

struct PatternRule {
  enum class Label { kOpinion, kSolicitation };
  Label label = Label::kOpinion;
  std::string name;
  std::vector<Slot> slots;
};

/// Pattern rules file: one rule per line,
///
///   label | name | slot;slot;...
///
/// with slot syntax TAG(x), WORDS(a|b), GAP(n); label is "opinion" or
/// "solicitation". Gaps are capped at 3; a rule needs at least one non-gap
/// slot. '#' starts a comment.
class RuleSet {
 public:
  static RuleSet load(const std::filesystem::path& path);
  static RuleSet parse(std::string_view content);

  const std::vector<PatternRule>& rules() const { return rules_; }

 private:
  std::vector<PatternRule> rules_;
};

/// Names of every rule whose slot sequence matches a contiguous token
/// subsequence (gap slots may absorb up to their max_gap tokens).
std::set<std::string> match_patterns(const TokenStream& stream,
                                     const std::vector<PatternRule>& rules);

struct StrategyFlags {
  bool has_opinion = false;
  bool has_solicitation = false;
};

/// True flags iff any rule with the corresponding label matches the text.
StrategyFlags strategy_flags(std::string_view text, const Lexicon& lexicon,
                             const RuleSet& rules);

}  // namespace rolemine
