#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clarity/corpus.hpp"
#include "clarity/keyphrase.hpp"
#include "clarity/retrieval.hpp"

// Similar Questions Model features: (i) the question itself, (ii) the
// retrieved similar questions Q', (iii) clarification questions CQ'.
namespace clarity::features {

inline constexpr std::size_t kClarificationDepth = 10;

std::vector<int> default_k_list();

// Ordered feature names for a k list:
// Len ContainsPre ContainsQuote ContainsQuest Readability SimSum SimMax SimAvg
// then LenSim@k LenUnclear@k LenClear@k Majority@k Ratio@k Fraction@k per k,
// then CQGlobal CQIndividual CQWeighted.
std::vector<std::string> feature_names(std::span<const int> k_list);

// Coleman-Liau index: 0.0588 L - 0.296 S - 15.8 with L letters and S
// sentences per 100 whitespace-separated words. Throws on zero words.
double readability_cli(std::string_view raw_text);

struct QuestionFeatures {
  double len = 0;
  double contains_pre = 0;
  double contains_quote = 0;
  double contains_quest = 0;
  double readability = 0;
};

QuestionFeatures question_features(const Question& q);

struct PrefixFeatures {
  double len_sim = 0;
  double len_unclear = 0;
  double len_clear = 0;
  double majority = 0;
  double ratio = 0;
  double fraction = 0;
};

struct SimilarityFeatures {
  double sim_sum = 0;
  double sim_max = 0;
  double sim_avg = 0;
  std::vector<PrefixFeatures> per_k;  // parallel to the k list
};

// Label statistics of the top-k prefix. Majority is 1 iff unclear >= clear
// (0 on an empty prefix); Ratio clamps a zero unclear count to 1.
PrefixFeatures prefix_features(std::span<const retrieval::ScoredHit> hits, std::size_t k);

SimilarityFeatures similarity_features(std::span<const retrieval::ScoredHit> hits,
                                       std::span<const int> k_list);

// Cosine of two count vectors; 0 if either is zero.
double cosine(const keyphrase::TokenCounts& a, const keyphrase::TokenCounts& b);

struct ClarificationEntry {
  retrieval::ScoredHit source;
  std::string text;
  std::vector<keyphrase::Keyphrase> phrases;
  keyphrase::TokenCounts tokens;
};

struct ClarificationSet {
  std::vector<ClarificationEntry> entries;
};

struct ClarityScores {
  double global = 0;
  double individual = 0;
  double weighted = 0;
};

struct WeightedVector {
  keyphrase::TokenCounts counts;
  double similarity = 0;
};

// Scores from a ready keyphrase vector f(q) and the f(cq') entries.
ClarityScores combine_clarity(const keyphrase::TokenCounts& fq,
                              std::span<const WeightedVector> entries);

// f(q) counts, in question_tokens, every keyphrase token present in CQ'.
ClarityScores clarity_scores(std::span<const std::string> question_tokens,
                             const ClarificationSet& cq);

// Per-question keyphrases of clarification texts, precomputed for the
// unclear training questions.
class ClarificationLibrary {
 public:
  struct Text {
    std::string text;
    std::vector<keyphrase::Keyphrase> phrases;
    keyphrase::TokenCounts tokens;
  };

  ClarificationLibrary() = default;
  ClarificationLibrary(std::span<const Question> training, const text::StopwordList& stopwords);

  // Empty span for unknown or clear questions.
  std::span<const Text> texts(std::int64_t question_id) const;

 private:
  std::unordered_map<std::int64_t, std::vector<Text>> by_question_;
};

// CQ' from the first `depth` unclear hits.
ClarificationSet build_clarification_set(std::span<const retrieval::ScoredHit> hits,
                                         const ClarificationLibrary& library,
                                         std::size_t depth = kClarificationDepth);

struct SqmOptions {
  std::size_t retrieval_depth = retrieval::kDefaultDepth;
  std::vector<int> k_list = default_k_list();
  retrieval::Bm25Params bm25;
};

struct SqmResult {
  std::vector<double> values;  // ordered as feature_names(k_list)
  std::vector<retrieval::ScoredHit> hits;
  ClarificationSet clarifications;
  ClarityScores clarity;
};

// Retrieval plus all three feature groups for one question.
class SqmExtractor {
 public:
  SqmExtractor(const retrieval::InvertedIndex& index, std::span<const Question> training,
               const text::StopwordList& stopwords, SqmOptions options = {});

  SqmResult extract(const Question& q, std::optional<std::int64_t> exclude_id) const;

  // exclude_id = q.id, so indexed questions never retrieve themselves.
  SqmResult extract(const Question& q) const { return extract(q, q.id); }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const SqmOptions& options() const noexcept { return options_; }

 private:
  const retrieval::InvertedIndex& index_;
  const text::StopwordList& stopwords_;
  SqmOptions options_;
  ClarificationLibrary library_;
  std::vector<std::string> names_;
};

struct FeatureRow {
  std::int64_t id = 0;
  std::vector<double> values;
  Label label = Label::clear;
};

// Header "id,<names>,label"; one row per question.
void write_feature_csv(std::ostream& out, std::span<const std::string> names,
                       std::span<const FeatureRow> rows);

}  // namespace clarity::features
