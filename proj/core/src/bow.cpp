#include "clarity/bow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "clarity/error.hpp"

namespace clarity::features {
namespace {

std::string join_range(std::span<const std::string> tokens, std::size_t begin, std::size_t n) {
  std::string g = tokens[begin];
  for (std::size_t j = 1; j < n; ++j) {
    g += ' ';
    g += tokens[begin + j];
  }
  return g;
}

}  // namespace

std::vector<std::string> ngrams(std::span<const std::string> tokens, int max_n) {
  std::vector<std::string> out;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) out.push_back(join_range(tokens, i, n));
  }
  return out;
}

NgramVocabulary::NgramVocabulary(int max_n, std::size_t doc_count, std::vector<std::string> terms,
                                 std::vector<std::size_t> dfs)
    : max_n_(max_n), doc_count_(doc_count), terms_(std::move(terms)), dfs_(std::move(dfs)) {
  if (terms_.size() != dfs_.size()) throw InputError("n-gram vocabulary: terms/df size mismatch");
  if (max_n_ < 1) throw InputError("n-gram order must be at least 1");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i && terms_[i] <= terms_[i - 1]) throw InputError("n-gram vocabulary must be sorted");
    ids_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

// An n-gram's df never exceeds that of its (n-1)-gram prefix and suffix, so
// each order only counts n-grams whose sub-grams already passed min_df.
NgramVocabulary NgramVocabulary::build(std::span<const std::vector<std::string>* const> docs,
                                       int max_n, std::size_t min_df) {
  if (max_n < 1) throw InputError("n-gram order must be at least 1");
  std::vector<std::pair<std::string, std::size_t>> kept;
  std::unordered_set<std::string> previous;
  std::unordered_set<std::string> seen;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
    std::unordered_map<std::string, std::size_t> df;
    for (const auto* doc : docs) {
      seen.clear();
      const std::span<const std::string> tokens(*doc);
      for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        if (n > 1) {
          if (!previous.count(join_range(tokens, i, n - 1)) ||
              !previous.count(join_range(tokens, i + 1, n - 1))) {
            continue;
          }
        }
        auto g = join_range(tokens, i, n);
        if (seen.insert(g).second) ++df[g];
      }
    }
    previous.clear();
    for (auto& [g, count] : df) {
      if (count >= min_df) {
        previous.insert(g);
        kept.emplace_back(g, count);
      }
    }
  }
  std::sort(kept.begin(), kept.end());
  std::vector<std::string> terms;
  std::vector<std::size_t> dfs;
  terms.reserve(kept.size());
  dfs.reserve(kept.size());
  for (auto& [g, c] : kept) {
    terms.push_back(std::move(g));
    dfs.push_back(c);
  }
  return NgramVocabulary(max_n, docs.size(), std::move(terms), std::move(dfs));
}

std::int64_t NgramVocabulary::id(std::string_view ngram) const {
  auto it = ids_.find(std::string(ngram));
  return it == ids_.end() ? std::int64_t{-1} : std::int64_t{it->second};
}

double NgramVocabulary::idf(std::uint32_t id) const {
  return std::log((1.0 + static_cast<double>(doc_count_)) /
                  (1.0 + static_cast<double>(dfs_[id]))) +
         1.0;
}

SparseVector bow_vector(std::span<const std::string> tokens, const NgramVocabulary& vocab) {
  std::map<std::uint32_t, double> tf;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(vocab.max_n()); ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      auto id = vocab.id(join_range(tokens, i, n));
      if (id >= 0) tf[static_cast<std::uint32_t>(id)] += 1.0;
    }
  }
  SparseVector v;
  double norm = 0;
  for (const auto& [id, count] : tf) {
    const double w = count * vocab.idf(id);
    v.index.push_back(id);
    v.value.push_back(w);
    norm += w * w;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto& w : v.value) w /= norm;
  }
  return v;
}

}  // namespace clarity::features
