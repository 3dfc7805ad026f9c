// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/patterns.hpp"

#include <array>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "rolemine/io.hpp"
#include "rolemine/text.hpp"

namespace rolemine {

namespace {

const std::unordered_set<std::string>& negation_words() {
  static const std::unordered_set<std::string> kSet = {
      "not",      "no",      "never",    "neither",  "nor",      "cannot",
      "don't",    "doesn't", "didn't",   "won't",    "wouldn't", "shouldn't",
      "couldn't", "can't",   "isn't",    "aren't",   "wasn't",   "weren't",
      "ain't",    "haven't", "hasn't",   "hadn't",   "mustn't",  "mightn't",
      "shan't"};
  return kSet;
}

const std::unordered_set<std::string>& modal_words() {
  static const std::unordered_set<std::string> kSet = {
      "should", "must", "can", "could", "will", "would", "might", "may", "shall"};
  return kSet;
}

const std::unordered_set<std::string>& auxiliary_words() {
  static const std::unordered_set<std::string> kSet = {
      "am", "is", "are", "was", "were", "be",  "been", "being",
      "do", "does", "did", "have", "has", "had"};
  return kSet;
}

const std::unordered_set<std::string>& adverb_closed_list() {
  static const std::unordered_set<std::string> kSet = {"really", "definitely",
                                                       "actually", "very"};
  return kSet;
}

// Common sentence openers that capitalization alone should not promote to
// proper nouns.
const std::unordered_set<std::string>& function_words() {
  static const std::unordered_set<std::string> kSet = {
      "the",    "a",       "an",     "this",    "that",   "these",  "those",
      "there",  "here",    "and",    "but",     "or",     "so",     "yet",
      "if",     "as",      "at",     "by",      "for",    "from",   "in",
      "into",   "of",      "off",    "on",      "onto",   "to",     "with",
      "without", "about",  "above",  "after",   "before", "between",
      "during", "over",    "under",  "when",    "while",  "where",  "which",
      "who",    "whom",    "whose",  "why",     "how",    "what",   "all",
      "any",    "both",    "each",   "every",   "few",    "many",   "most",
      "much",   "some",    "several", "such",   "only",   "just",   "even",
      "also",   "again",   "once",   "now",     "then",   "since",  "because",
      "although", "though", "unless", "until",  "up",     "down",   "out",
      "please", "thanks",  "today",  "tomorrow", "yesterday"};
  return kSet;
}

TokenTag pronoun_tag(const std::string& lower, bool& matched) {
  matched = true;
  if (lower == "i" || lower == "we") return TokenTag::kPronounFirstSubjective;
  if (lower == "my" || lower == "mine" || lower == "our" || lower == "ours")
    return TokenTag::kPronounFirstPossessive;
  if (lower == "you" || lower == "your" || lower == "yours")
    return TokenTag::kPronounSecond;
  if (lower == "he" || lower == "she" || lower == "it" || lower == "they" ||
      lower == "them" || lower == "him" || lower == "her" || lower == "his" ||
      lower == "hers" || lower == "its" || lower == "theirs" || lower == "their")
    return TokenTag::kPronounThird;
  matched = false;
  return TokenTag::kPlain;
}

// First lexicon category of the given pos (in file order) matching the token.
const LexiconCategory* lookup_pos(const Lexicon& lexicon, LexPos pos,
                                  const std::string& lower) {
  for (const auto& category : lexicon.categories()) {
    if (category.pos != pos) continue;
    if (category.matches(lower)) return &category;
  }
  return nullptr;
}

}  // namespace

std::string_view token_tag_name(TokenTag tag) {
  switch (tag) {
    case TokenTag::kNegation: return "negation";
    case TokenTag::kModalVerb: return "modal";
    case TokenTag::kAuxiliaryVerb: return "aux";
    case TokenTag::kPronounFirstSubjective: return "pron_first_subj";
    case TokenTag::kPronounFirstPossessive: return "pron_first_poss";
    case TokenTag::kPronounSecond: return "pron_second";
    case TokenTag::kPronounThird: return "pron_third";
    case TokenTag::kLexVerb: return "verb";
    case TokenTag::kLexNoun: return "noun";
    case TokenTag::kLexAdjective: return "adj";
    case TokenTag::kAdverb: return "adverb";
    case TokenTag::kProperNoun: return "propernoun";
    case TokenTag::kPlain: return "plain";
  }
  return "plain";
}

TokenStream tokenize_and_tag(std::string_view text, const Lexicon& lexicon) {
  TokenStream stream;
  for (RawToken& raw : tokenize(text)) {
    TaggedToken token;
    token.surface = std::move(raw.surface);
    token.lower = std::move(raw.lower);
    token.sentence_initial = raw.sentence_initial;

    if (negation_words().count(token.lower)) {
      token.tag = TokenTag::kNegation;
    } else if (modal_words().count(token.lower)) {
      token.tag = TokenTag::kModalVerb;
    } else if (auxiliary_words().count(token.lower)) {
      token.tag = TokenTag::kAuxiliaryVerb;
    } else {
      bool is_pronoun = false;
      const TokenTag pron = pronoun_tag(token.lower, is_pronoun);
      if (is_pronoun) {
        token.tag = pron;
      } else if (const auto* cat = lookup_pos(lexicon, LexPos::kVerb, token.lower)) {
        token.tag = TokenTag::kLexVerb;
        token.category = cat->base_name;
      } else if (const auto* cat = lookup_pos(lexicon, LexPos::kNoun, token.lower)) {
        token.tag = TokenTag::kLexNoun;
        token.category = cat->base_name;
      } else if (const auto* cat =
                     lookup_pos(lexicon, LexPos::kAdjective, token.lower)) {
        token.tag = TokenTag::kLexAdjective;
        token.category = cat->base_name;
      } else if ((token.lower.size() > 2 &&
                  token.lower.compare(token.lower.size() - 2, 2, "ly") == 0) ||
                 adverb_closed_list().count(token.lower)) {
        token.tag = TokenTag::kAdverb;
      } else if (!token.surface.empty() &&
                 std::isupper(static_cast<unsigned char>(token.surface[0])) &&
                 (!token.sentence_initial || !function_words().count(token.lower))) {
        token.tag = TokenTag::kProperNoun;
      } else {
        token.tag = TokenTag::kPlain;
      }
    }
    stream.push_back(std::move(token));
  }
  return stream;
}

namespace {

constexpr int kMaxGap = 3;

Slot parse_slot(const std::string& text, std::size_t line_no) {
  const auto fail = [&](const std::string& why) -> Slot {
    throw std::runtime_error("pattern line " + std::to_string(line_no) + ": " + why);
  };
  const std::size_t open = text.find('(');
  if (open == std::string::npos || text.back() != ')')
    return fail("slot must look like TAG(x), WORDS(a|b) or GAP(n): '" + text + "'");
  const std::string head = to_lower(trim(text.substr(0, open)));
  const std::string body = trim(text.substr(open + 1, text.size() - open - 2));

  Slot slot;
  if (head == "gap") {
    slot.kind = Slot::Kind::kGap;
    try {
      slot.max_gap = std::stoi(body);
    } catch (const std::exception&) {
      return fail("GAP needs an integer: '" + body + "'");
    }
    if (slot.max_gap < 0 || slot.max_gap > kMaxGap)
      return fail("GAP must be in [0," + std::to_string(kMaxGap) + "]");
    return slot;
  }
  if (head == "words") {
    slot.kind = Slot::Kind::kWords;
    std::size_t start = 0;
    const std::string lowered = to_lower(body);
    while (start <= lowered.size()) {
      const std::size_t bar = lowered.find('|', start);
      const std::string word =
          trim(lowered.substr(start, bar == std::string::npos ? std::string::npos
                                                              : bar - start));
      if (!word.empty()) slot.words.insert(word);
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    if (slot.words.empty()) return fail("WORDS needs alternatives");
    return slot;
  }
  if (head == "tag") {
    slot.kind = Slot::Kind::kTag;
    std::string name = to_lower(body);
    const std::size_t colon = name.find(':');
    if (colon != std::string::npos) {
      slot.category = name.substr(colon + 1);
      name = name.substr(0, colon);
    }
    static const std::array<TokenTag, 13> kTags = {
        TokenTag::kNegation,       TokenTag::kModalVerb,
        TokenTag::kAuxiliaryVerb,  TokenTag::kPronounFirstSubjective,
        TokenTag::kPronounFirstPossessive, TokenTag::kPronounSecond,
        TokenTag::kPronounThird,   TokenTag::kLexVerb,
        TokenTag::kLexNoun,        TokenTag::kLexAdjective,
        TokenTag::kAdverb,         TokenTag::kProperNoun,
        TokenTag::kPlain};
    for (TokenTag tag : kTags) {
      if (token_tag_name(tag) == name) {
        slot.tag = tag;
        const bool lexical = tag == TokenTag::kLexVerb ||
                             tag == TokenTag::kLexNoun ||
                             tag == TokenTag::kLexAdjective;
        if (lexical && slot.category.empty())
          return fail("lexicon tag needs a category, e.g. TAG(verb:social)");
        if (!lexical && !slot.category.empty())
          return fail("tag '" + name + "' does not take a category");
        return slot;
      }
    }
    return fail("unknown tag '" + name + "'");
  }
  return fail("unknown slot kind '" + head + "'");
}

}  // namespace

RuleSet RuleSet::parse(std::string_view content) {
  RuleSet set;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    // Split on the first two separators only; WORDS(...) slots use '|' too.
    const std::size_t first = stripped.find('|');
    const std::size_t second =
        first == std::string::npos ? std::string::npos : stripped.find('|', first + 1);
    if (second == std::string::npos)
      throw std::runtime_error("pattern line " + std::to_string(line_no) +
                               ": expected 'label | name | slots'");
    const std::array<std::string, 3> parts = {
        trim(stripped.substr(0, first)),
        trim(stripped.substr(first + 1, second - first - 1)),
        trim(stripped.substr(second + 1))};
    PatternRule rule;
    const std::string label = to_lower(parts[0]);
    if (label == "opinion")
      rule.label = PatternRule::Label::kOpinion;
    else if (label == "solicitation")
      rule.label = PatternRule::Label::kSolicitation;
    else
      throw std::runtime_error("pattern line " + std::to_string(line_no) +
                               ": unknown label '" + parts[0] + "'");
    rule.name = parts[1];
    if (rule.name.empty())
      throw std::runtime_error("pattern line " + std::to_string(line_no) +
                               ": empty rule name");
    for (const auto& other : set.rules_) {
      if (other.name == rule.name)
        throw std::runtime_error("duplicate pattern rule name: " + rule.name);
    }

    bool has_concrete_slot = false;
    for (const std::string& slot_text : split_trimmed(parts[2], ';')) {
      if (slot_text.empty()) continue;
      Slot slot = parse_slot(slot_text, line_no);
      if (slot.kind != Slot::Kind::kGap) has_concrete_slot = true;
      rule.slots.push_back(std::move(slot));
    }
    if (!has_concrete_slot)
      throw std::runtime_error("pattern line " + std::to_string(line_no) +
                               ": rule needs at least one non-gap slot");
    set.rules_.push_back(std::move(rule));
  }
  return set;
}

RuleSet RuleSet::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

namespace {

bool slot_accepts(const Slot& slot, const TaggedToken& token) {
  if (slot.kind == Slot::Kind::kWords) return slot.words.count(token.lower) > 0;
  if (token.tag != slot.tag) return false;
  return slot.category.empty() || token.category == slot.category;
}

// Backtracking match of slots[si..] against stream[ti..]; gaps absorb 0..max.
bool match_from(const std::vector<Slot>& slots, std::size_t si,
                const TokenStream& stream, std::size_t ti) {
  if (si == slots.size()) return true;
  const Slot& slot = slots[si];
  if (slot.kind == Slot::Kind::kGap) {
    for (int skip = 0; skip <= slot.max_gap; ++skip) {
      if (ti + static_cast<std::size_t>(skip) > stream.size()) break;
      if (match_from(slots, si + 1, stream, ti + static_cast<std::size_t>(skip)))
        return true;
    }
    return false;
  }
  if (ti >= stream.size()) return false;
  return slot_accepts(slot, stream[ti]) && match_from(slots, si + 1, stream, ti + 1);
}

}  // namespace

std::set<std::string> match_patterns(const TokenStream& stream,
                                     const std::vector<PatternRule>& rules) {
  std::set<std::string> matched;
  for (const PatternRule& rule : rules) {
    for (std::size_t start = 0; start <= stream.size(); ++start) {
      if (match_from(rule.slots, 0, stream, start)) {
        matched.insert(rule.name);
        break;
      }
    }
  }
  return matched;
}

StrategyFlags strategy_flags(std::string_view text, const Lexicon& lexicon,
                             const RuleSet& rules) {
  const TokenStream stream = tokenize_and_tag(text, lexicon);
  const std::set<std::string> matched = match_patterns(stream, rules.rules());
  StrategyFlags flags;
  for (const PatternRule& rule : rules.rules()) {
    if (!matched.count(rule.name)) continue;
    if (rule.label == PatternRule::Label::kOpinion) flags.has_opinion = true;
    if (rule.label == PatternRule::Label::kSolicitation) flags.has_solicitation = true;
  }
  return flags;
}

}  // namespace rolemine
