#include "clarity/keyphrase.hpp"

#include <algorithm>
#include <unordered_map>

namespace clarity::keyphrase {

std::vector<Keyphrase> extract_keyphrases(std::string_view input,
                                          const text::StopwordList& stopwords) {
  const auto tokens = text::tokenize(input);

  std::vector<std::vector<std::string>> occurrences;
  std::vector<std::string> run;
  auto close_run = [&] {
    if (!run.empty()) occurrences.push_back(std::move(run));
    run.clear();
  };
  for (const auto& t : tokens) {
    if (text::is_punctuation_token(t) || t == text::kUrlToken || stopwords.contains(t)) {
      close_run();
    } else {
      run.push_back(t);
    }
  }
  close_run();
  if (occurrences.empty()) return {};

  std::unordered_map<std::string, double> freq;
  std::unordered_map<std::string, double> degree;
  for (const auto& phrase : occurrences) {
    for (const auto& w : phrase) {
      freq[w] += 1.0;
      degree[w] += static_cast<double>(phrase.size());
    }
  }

  std::vector<Keyphrase> distinct;
  for (const auto& phrase : occurrences) {
    bool seen = std::any_of(distinct.begin(), distinct.end(),
                            [&](const Keyphrase& k) { return k.tokens == phrase; });
    if (seen) continue;
    Keyphrase k{phrase, 0.0};
    for (const auto& w : phrase) k.score += degree[w] / freq[w];
    distinct.push_back(std::move(k));
  }
  std::stable_sort(distinct.begin(), distinct.end(),
                   [](const Keyphrase& a, const Keyphrase& b) { return a.score > b.score; });
  const std::size_t keep = std::max<std::size_t>(1, (distinct.size() + 2) / 3);
  distinct.resize(std::min(keep, distinct.size()));
  return distinct;
}

TokenCounts keyphrase_tokens(std::span<const Keyphrase> phrases) {
  TokenCounts counts;
  for (const auto& p : phrases) {
    for (const auto& t : p.tokens) ++counts[t];
  }
  return counts;
}

}  // namespace clarity::keyphrase
