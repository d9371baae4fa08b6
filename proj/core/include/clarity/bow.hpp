#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Bag-of-words TF-IDF n-gram representation for the BoW LR baseline.
namespace clarity::features {

struct SparseVector {
  std::vector<std::uint32_t> index;  // ascending
  std::vector<double> value;

  std::size_t nnz() const noexcept { return index.size(); }
};

// All n-grams of length 1..max_n, joined with single spaces.
std::vector<std::string> ngrams(std::span<const std::string> tokens, int max_n);

class NgramVocabulary {
 public:
  NgramVocabulary() = default;
  // terms must be sorted and unique; dfs parallel to terms.
  NgramVocabulary(int max_n, std::size_t doc_count, std::vector<std::string> terms,
                  std::vector<std::size_t> dfs);

  // n-grams with document frequency >= min_df over docs.
  static NgramVocabulary build(std::span<const std::vector<std::string>* const> docs, int max_n,
                               std::size_t min_df = 3);

  int max_n() const noexcept { return max_n_; }
  std::size_t doc_count() const noexcept { return doc_count_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::size_t>& dfs() const noexcept { return dfs_; }

  // -1 when absent.
  std::int64_t id(std::string_view ngram) const;
  // ln((1 + N) / (1 + df)) + 1
  double idf(std::uint32_t id) const;

 private:
  int max_n_ = 1;
  std::size_t doc_count_ = 0;
  std::vector<std::string> terms_;
  std::vector<std::size_t> dfs_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// tf * idf per in-vocabulary n-gram, scaled to unit Euclidean norm.
// A question with no in-vocabulary n-gram maps to the zero vector.
SparseVector bow_vector(std::span<const std::string> tokens, const NgramVocabulary& vocab);

}  // namespace clarity::features
