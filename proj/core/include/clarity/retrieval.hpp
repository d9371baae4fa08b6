#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clarity/corpus.hpp"
#include "clarity/text.hpp"

namespace clarity::retrieval {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

inline constexpr std::size_t kDefaultDepth = 50;

struct Posting {
  std::uint32_t doc = 0;  // internal document number
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

// BM25 index over the training questions. Internal document numbers follow
// ascending question id, so ordering by number is ordering by id.
class InvertedIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  std::size_t doc_count() const noexcept { return doc_ids_.size(); }
  std::size_t term_count() const noexcept { return terms_.size(); }
  double avg_doc_length() const noexcept { return avg_doc_length_; }

  std::int64_t doc_id(std::uint32_t doc) const { return doc_ids_[doc]; }
  std::uint32_t doc_length(std::uint32_t doc) const { return doc_lengths_[doc]; }
  Label doc_label(std::uint32_t doc) const { return doc_labels_[doc]; }
  std::optional<std::uint32_t> doc_number(std::int64_t id) const;
  bool contains_doc(std::int64_t id) const { return doc_number(id).has_value(); }

  // Empty span for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  std::size_t df(std::string_view term) const { return postings(term).size(); }

  const std::vector<std::string>& terms() const noexcept { return terms_; }

  void save(std::ostream& out) const;
  static InvertedIndex load(std::istream& in);

  friend InvertedIndex build_index(std::span<const Question> training);

 private:
  std::vector<std::string> terms_;  // sorted; term id = position
  std::unordered_map<std::string, std::uint32_t> term_ids_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::int64_t> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  std::vector<Label> doc_labels_;
  double avg_doc_length_ = 0;

  void rebuild_lookup();
};

// Indexes every token of each question. Throws on an empty or duplicate set.
InvertedIndex build_index(std::span<const Question> training);

// Title tokens then tag tokens, without stopwords and punctuation.
std::vector<std::string> make_query(const Question& question, const text::StopwordList& stopwords);

struct ScoredHit {
  std::int64_t doc_id = 0;
  double score = 0;
  Label label = Label::clear;
};

// idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
double bm25_idf(std::size_t doc_count, std::size_t df);

// Top-k documents by BM25, descending score then ascending id. Each query
// token occurrence contributes once. exclude_id is never returned.
std::vector<ScoredHit> search(const InvertedIndex& index, std::span<const std::string> query,
                              std::size_t k, std::optional<std::int64_t> exclude_id = std::nullopt,
                              const Bm25Params& params = {});

}  // namespace clarity::retrieval
