// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rolemine {

/// A whitespace/punctuation-delimited token. Internal apostrophes stay inside
/// the token ("don't" is one token); trailing punctuation never enters one.
struct RawToken {
  std::string surface;
  std::string lower;
  bool sentence_initial = false;  // first token, or follows . ! ?
};

/// UTF-8 safe split on whitespace and punctuation. Bytes >= 0x80 are treated
/// as word characters; curly apostrophes are normalized to ASCII.
std::vector<RawToken> tokenize(std::string_view text);

}  // namespace rolemine
