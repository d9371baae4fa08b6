#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clarity/text.hpp"

// RAKE keyphrase extraction over clarification questions.
namespace clarity::keyphrase {

struct Keyphrase {
  std::vector<std::string> tokens;
  double score = 0;

  std::string text() const { return text::join(tokens); }
};

// Token -> count.
using TokenCounts = std::map<std::string, int>;

// Candidates are maximal runs of tokens that are neither stopwords nor
// punctuation. Word score deg/freq, phrase score the sum over its words.
// Returns the best ceil(T/3) distinct candidates (at least one), ties in
// order of first occurrence.
std::vector<Keyphrase> extract_keyphrases(std::string_view text,
                                          const text::StopwordList& stopwords);

// Multiset union of the phrases' tokens.
TokenCounts keyphrase_tokens(std::span<const Keyphrase> phrases);

}  // namespace clarity::keyphrase
