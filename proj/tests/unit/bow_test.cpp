#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "clarity/bow.hpp"
#include "clarity/error.hpp"

namespace clarity::features {
namespace {

using Tokens = std::vector<std::string>;

std::vector<const Tokens*> ptrs(const std::vector<Tokens>& docs) {
  std::vector<const Tokens*> out;
  for (const auto& d : docs) out.push_back(&d);
  return out;
}

TEST(Ngrams, AllOrders) {
  const Tokens t = {"a", "b", "c"};
  EXPECT_EQ(ngrams(t, 1), (Tokens{"a", "b", "c"}));
  EXPECT_EQ(ngrams(t, 3), (Tokens{"a", "b", "c", "a b", "b c", "a b c"}));
}

TEST(BowVector, SingleTokenHasUnitWeight) {
  const std::vector<Tokens> docs = {{"x"}, {"x"}, {"x"}};
  const auto vocab = NgramVocabulary::build(ptrs(docs), 1);
  const auto v = bow_vector(Tokens{"x"}, vocab);
  ASSERT_EQ(v.nnz(), 1u);
  EXPECT_DOUBLE_EQ(v.value[0], 1.0);
}

TEST(BowVector, RepetitionDoesNotChangeDirection) {
  const std::vector<Tokens> docs = {{"x", "y"}, {"x", "y"}, {"x", "y", "z"}};
  const auto vocab = NgramVocabulary::build(ptrs(docs), 1);
  const auto a = bow_vector(Tokens{"x", "y"}, vocab);
  const auto b = bow_vector(Tokens{"x", "y", "x", "y"}, vocab);
  ASSERT_EQ(a.index, b.index);
  for (std::size_t i = 0; i < a.nnz(); ++i) EXPECT_NEAR(a.value[i], b.value[i], 1e-15);
}

TEST(BowVector, MatchesBruteForceTfIdf) {
  const std::vector<Tokens> docs = {{"a", "b", "b"}, {"a", "c"}, {"a", "b", "d"}};
  const auto vocab = NgramVocabulary::build(ptrs(docs), 1, 1);
  ASSERT_EQ(vocab.terms(), (Tokens{"a", "b", "c", "d"}));
  const Tokens q = {"b", "b", "c", "e"};
  // df: b 2, c 1 over N = 3
  const double wb = 2 * (std::log(4.0 / 3.0) + 1);
  const double wc = 1 * (std::log(4.0 / 2.0) + 1);
  const double norm = std::sqrt(wb * wb + wc * wc);
  const auto v = bow_vector(q, vocab);
  ASSERT_EQ(v.index, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_NEAR(v.value[0], wb / norm, 1e-12);
  EXPECT_NEAR(v.value[1], wc / norm, 1e-12);
}

TEST(BowVector, OutOfVocabularyIsZero) {
  const std::vector<Tokens> docs = {{"a"}, {"a"}, {"a"}};
  const auto vocab = NgramVocabulary::build(ptrs(docs), 3);
  EXPECT_EQ(bow_vector(Tokens{"q", "r"}, vocab).nnz(), 0u);
  EXPECT_EQ(vocab.id("zzz"), -1);
}

TEST(NgramVocabulary, PrunedCountMatchesBruteForce) {
  std::mt19937_64 rng(5);
  const Tokens alphabet = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Tokens> docs(20);
    for (auto& d : docs) {
      const auto len = 1 + rng() % 8;
      for (std::size_t i = 0; i < len; ++i) d.push_back(alphabet[rng() % alphabet.size()]);
    }
    std::map<std::string, std::size_t> df;
    for (const auto& d : docs) {
      const auto g = ngrams(d, 3);
      for (const auto& s : std::set<std::string>(g.begin(), g.end())) ++df[s];
    }
    Tokens want_terms;
    std::vector<std::size_t> want_dfs;
    for (const auto& [g, c] : df) {
      if (c >= 3) {
        want_terms.push_back(g);
        want_dfs.push_back(c);
      }
    }
    const auto vocab = NgramVocabulary::build(ptrs(docs), 3, 3);
    EXPECT_EQ(vocab.terms(), want_terms);
    EXPECT_EQ(vocab.dfs(), want_dfs);
    EXPECT_EQ(vocab.doc_count(), docs.size());
  }
}

TEST(NgramVocabulary, RejectsBadInput) {
  EXPECT_THROW(NgramVocabulary(1, 1, {"b", "a"}, {1, 1}), InputError);
  EXPECT_THROW(NgramVocabulary(1, 1, {"a"}, {}), InputError);
  EXPECT_THROW(NgramVocabulary(0, 1, {}, {}), InputError);
}

}  // namespace
}  // namespace clarity::features
