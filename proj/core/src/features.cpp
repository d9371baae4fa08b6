#include "clarity/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "clarity/error.hpp"
#include "util.hpp"

namespace clarity::features {
namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<int> default_k_list() { return {10, 20, 50}; }

std::vector<std::string> feature_names(std::span<const int> k_list) {
  std::vector<std::string> names = {"Len",    "ContainsPre", "ContainsQuote", "ContainsQuest",
                                    "Readability", "SimSum", "SimMax",      "SimAvg"};
  for (int k : k_list) {
    const std::string suffix = "@" + std::to_string(k);
    for (const char* base : {"LenSim", "LenUnclear", "LenClear", "Majority", "Ratio", "Fraction"}) {
      names.push_back(base + suffix);
    }
  }
  names.insert(names.end(), {"CQGlobal", "CQIndividual", "CQWeighted"});
  return names;
}

double readability_cli(std::string_view raw_text) {
  std::size_t words = 0;
  std::size_t letters = 0;
  bool in_word = false;
  for (char c : raw_text) {
    if (detail::is_space(c)) {
      in_word = false;
      continue;
    }
    if (!in_word) ++words;
    in_word = true;
    if (is_ascii_alnum(c)) ++letters;
  }
  if (words == 0) throw InputError("readability of a text without words is undefined");
  const auto sentences = std::max<std::size_t>(1, text::split_sentences(raw_text).size());
  const double w = static_cast<double>(words);
  const double l = 100.0 * static_cast<double>(letters) / w;
  const double s = 100.0 * static_cast<double>(sentences) / w;
  return 0.0588 * l - 0.296 * s - 15.8;
}

QuestionFeatures question_features(const Question& q) {
  QuestionFeatures f;
  f.len = static_cast<double>(q.tokens.size());
  f.contains_pre = q.contains_pre ? 1.0 : 0.0;
  f.contains_quote = q.contains_quote ? 1.0 : 0.0;
  f.contains_quest =
      std::find(q.tokens.begin(), q.tokens.end(), "?") != q.tokens.end() ? 1.0 : 0.0;
  f.readability = detail::trim(q.raw_text).empty() ? 0.0 : readability_cli(q.raw_text);
  return f;
}

PrefixFeatures prefix_features(std::span<const retrieval::ScoredHit> hits, std::size_t k) {
  const auto prefix = hits.first(std::min(k, hits.size()));
  PrefixFeatures f;
  std::size_t unclear = 0;
  for (const auto& h : prefix) {
    if (h.label == Label::unclear) ++unclear;
  }
  const std::size_t clear = prefix.size() - unclear;
  f.len_sim = static_cast<double>(prefix.size());
  f.len_unclear = static_cast<double>(unclear);
  f.len_clear = static_cast<double>(clear);
  f.majority = (!prefix.empty() && unclear >= clear) ? 1.0 : 0.0;
  f.ratio = static_cast<double>(clear) / static_cast<double>(std::max<std::size_t>(unclear, 1));
  f.fraction = prefix.empty() ? 0.0 : static_cast<double>(clear) / static_cast<double>(prefix.size());
  return f;
}

SimilarityFeatures similarity_features(std::span<const retrieval::ScoredHit> hits,
                                       std::span<const int> k_list) {
  SimilarityFeatures f;
  for (const auto& h : hits) {
    f.sim_sum += h.score;
    f.sim_max = std::max(f.sim_max, h.score);
  }
  if (!hits.empty()) f.sim_avg = f.sim_sum / static_cast<double>(hits.size());
  for (int k : k_list) f.per_k.push_back(prefix_features(hits, static_cast<std::size_t>(k)));
  return f;
}

double cosine(const keyphrase::TokenCounts& a, const keyphrase::TokenCounts& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, c] : a) {
    na += static_cast<double>(c) * c;
    if (auto it = b.find(t); it != b.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [t, c] : b) nb += static_cast<double>(c) * c;
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

ClarityScores combine_clarity(const keyphrase::TokenCounts& fq,
                              std::span<const WeightedVector> entries) {
  ClarityScores s;
  keyphrase::TokenCounts global;
  for (const auto& e : entries) {
    for (const auto& [t, c] : e.counts) global[t] += c;
    const double cos = cosine(fq, e.counts);
    s.individual += cos;
    s.weighted += cos * e.similarity;
  }
  s.global = cosine(fq, global);
  return s;
}

ClarityScores clarity_scores(std::span<const std::string> question_tokens,
                             const ClarificationSet& cq) {
  if (cq.entries.empty()) return {};
  keyphrase::TokenCounts fq;
  for (const auto& e : cq.entries) {
    for (const auto& [t, c] : e.tokens) fq.emplace(t, 0);
  }
  for (const auto& t : question_tokens) {
    if (auto it = fq.find(t); it != fq.end()) ++it->second;
  }
  for (auto it = fq.begin(); it != fq.end();) {
    it = it->second == 0 ? fq.erase(it) : std::next(it);
  }
  std::vector<WeightedVector> entries;
  entries.reserve(cq.entries.size());
  for (const auto& e : cq.entries) entries.push_back({e.tokens, e.source.score});
  return combine_clarity(fq, entries);
}

ClarificationLibrary::ClarificationLibrary(std::span<const Question> training,
                                           const text::StopwordList& stopwords) {
  for (const auto& q : training) {
    if (q.label != Label::unclear || q.clarification_texts.empty()) continue;
    auto& texts = by_question_[q.id];
    for (const auto& t : q.clarification_texts) {
      Text entry;
      entry.text = t;
      entry.phrases = keyphrase::extract_keyphrases(t, stopwords);
      entry.tokens = keyphrase::keyphrase_tokens(entry.phrases);
      texts.push_back(std::move(entry));
    }
  }
}

std::span<const ClarificationLibrary::Text> ClarificationLibrary::texts(
    std::int64_t question_id) const {
  auto it = by_question_.find(question_id);
  if (it == by_question_.end()) return {};
  return it->second;
}

ClarificationSet build_clarification_set(std::span<const retrieval::ScoredHit> hits,
                                         const ClarificationLibrary& library, std::size_t depth) {
  ClarificationSet cq;
  std::size_t used = 0;
  for (const auto& h : hits) {
    if (used == depth) break;
    if (h.label != Label::unclear) continue;
    ++used;
    for (const auto& t : library.texts(h.doc_id)) {
      cq.entries.push_back({h, t.text, t.phrases, t.tokens});
    }
  }
  return cq;
}

SqmExtractor::SqmExtractor(const retrieval::InvertedIndex& index,
                           std::span<const Question> training,
                           const text::StopwordList& stopwords, SqmOptions options)
    : index_(index),
      stopwords_(stopwords),
      options_(std::move(options)),
      library_(training, stopwords),
      names_(feature_names(options_.k_list)) {
  if (options_.retrieval_depth < 1) throw InputError("retrieval depth must be at least 1");
}

SqmResult SqmExtractor::extract(const Question& q, std::optional<std::int64_t> exclude_id) const {
  SqmResult r;
  const auto query = retrieval::make_query(q, stopwords_);
  r.hits = retrieval::search(index_, query, options_.retrieval_depth, exclude_id, options_.bm25);
  r.clarifications = build_clarification_set(r.hits, library_);
  r.clarity = clarity_scores(q.tokens, r.clarifications);

  const auto qf = question_features(q);
  const auto sf = similarity_features(r.hits, options_.k_list);
  r.values = {qf.len,        qf.contains_pre, qf.contains_quote, qf.contains_quest,
              qf.readability, sf.sim_sum,     sf.sim_max,        sf.sim_avg};
  for (const auto& p : sf.per_k) {
    r.values.insert(r.values.end(),
                    {p.len_sim, p.len_unclear, p.len_clear, p.majority, p.ratio, p.fraction});
  }
  r.values.insert(r.values.end(), {r.clarity.global, r.clarity.individual, r.clarity.weighted});
  return r;
}

void write_feature_csv(std::ostream& out, std::span<const std::string> names,
                       std::span<const FeatureRow> rows) {
  out << "id";
  for (const auto& n : names) out << ',' << n;
  out << ",label\n";
  for (const auto& r : rows) {
    if (r.values.size() != names.size()) throw Error("feature row width does not match header");
    out << r.id;
    for (double v : r.values) out << ',' << format_double(v);
    out << ',' << to_int(r.label) << '\n';
  }
}

}  // namespace clarity::features
