#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "clarity/error.hpp"
#include "clarity/features.hpp"
#include "clarity/text.hpp"
#include "test_support.hpp"

namespace clarity::features {
namespace {

using retrieval::ScoredHit;

std::vector<ScoredHit> hits_of(std::vector<std::pair<double, Label>> rows) {
  std::vector<ScoredHit> out;
  std::int64_t id = 1;
  for (auto [s, l] : rows) out.push_back({id++, s, l});
  return out;
}

TEST(SimilarityFeatures, GoldenTable) {
  const auto hits = hits_of({{5, Label::unclear}, {2, Label::unclear}, {1, Label::clear}});
  const std::vector<int> ks = {10};
  const auto f = similarity_features(hits, ks);
  EXPECT_DOUBLE_EQ(f.sim_sum, 8.0);
  EXPECT_DOUBLE_EQ(f.sim_max, 5.0);
  EXPECT_DOUBLE_EQ(f.sim_avg, 8.0 / 3.0);
  ASSERT_EQ(f.per_k.size(), 1u);
  const auto& p = f.per_k[0];
  EXPECT_DOUBLE_EQ(p.len_sim, 3);
  EXPECT_DOUBLE_EQ(p.len_unclear, 2);
  EXPECT_DOUBLE_EQ(p.len_clear, 1);
  EXPECT_DOUBLE_EQ(p.majority, 1);
  EXPECT_DOUBLE_EQ(p.ratio, 0.5);
  EXPECT_DOUBLE_EQ(p.fraction, 1.0 / 3.0);
}

TEST(SimilarityFeatures, EmptyHits) {
  const std::vector<int> ks = {10, 20};
  const auto f = similarity_features({}, ks);
  EXPECT_EQ(f.sim_sum, 0);
  EXPECT_EQ(f.sim_max, 0);
  EXPECT_EQ(f.sim_avg, 0);
  for (const auto& p : f.per_k) {
    EXPECT_EQ(p.len_sim, 0);
    EXPECT_EQ(p.majority, 0);
    EXPECT_EQ(p.ratio, 0);
    EXPECT_EQ(p.fraction, 0);
  }
}

TEST(SimilarityFeatures, AllClearClampsRatioDenominator) {
  const auto p = prefix_features(hits_of({{3, Label::clear}, {2, Label::clear}}), 10);
  EXPECT_DOUBLE_EQ(p.ratio, 2.0);
  EXPECT_DOUBLE_EQ(p.majority, 0.0);
  EXPECT_DOUBLE_EQ(p.fraction, 1.0);
}

TEST(SimilarityFeatures, MajorityTieIsUnclear) {
  const auto p = prefix_features(hits_of({{3, Label::clear}, {2, Label::unclear}}), 10);
  EXPECT_DOUBLE_EQ(p.majority, 1.0);
}

TEST(SimilarityFeatures, PrefixReadsOnlyTopK) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoredHit> hits;
    for (int i = 0; i < 50; ++i) {
      hits.push_back({i + 1, 50.0 - i, rng() % 2 ? Label::unclear : Label::clear});
    }
    const auto before = prefix_features(hits, 10);
    for (std::size_t i = 10; i < hits.size(); ++i) {
      hits[i].label = rng() % 2 ? Label::unclear : Label::clear;
    }
    const auto after = prefix_features(hits, 10);
    EXPECT_EQ(before.len_unclear, after.len_unclear);
    EXPECT_EQ(before.ratio, after.ratio);
    EXPECT_EQ(before.fraction, after.fraction);
  }
}

TEST(Readability, HandComputed) {
  // 4 words, 11 letters, 1 sentence: L = 275, S = 25.
  EXPECT_NEAR(readability_cli("this is a test."), 0.0588 * 275 - 0.296 * 25 - 15.8, 1e-12);
  EXPECT_NEAR(readability_cli("this is a test."), -7.03, 1e-9);
}

TEST(Readability, XmlEditorQuestion) {
  const std::string raw =
      "Simplest XML editor I need the simplest editor with utf8 support for editing xml "
      "files; It's for a non programmer (so no atom or the like), to edit existing files. "
      "Any suggestion?";
  // 32 words, 141 letters, 2 sentences.
  EXPECT_NEAR(readability_cli(raw), 8.25875, 1e-9);
}

TEST(Readability, InvariantUnderRepetition) {
  const std::string s = "The quick brown fox jumps. Does it?";
  EXPECT_NEAR(readability_cli(s), readability_cli(s + " " + s), 1e-12);
}

TEST(Readability, NoWordsThrows) {
  EXPECT_THROW(readability_cli("   "), InputError);
  EXPECT_THROW(readability_cli(""), InputError);
}

TEST(QuestionFeatures, FlagsAndLength) {
  auto q = testing::make_question(1, {"why", "?", "x"});
  q.contains_pre = true;
  q.raw_text = "why? x";
  const auto f = question_features(q);
  EXPECT_EQ(f.len, 3);
  EXPECT_EQ(f.contains_pre, 1);
  EXPECT_EQ(f.contains_quote, 0);
  EXPECT_EQ(f.contains_quest, 1);
}

TEST(Clarity, HandExample) {
  // f(q) = (1, 1) over {x, y}; one clarification {x} retrieved with score 2.
  const keyphrase::TokenCounts fq = {{"x", 1}, {"y", 1}};
  const std::vector<WeightedVector> entries = {{{{"x", 1}}, 2.0}};
  const auto s = combine_clarity(fq, entries);
  EXPECT_NEAR(s.global, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.individual, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.weighted, std::sqrt(2.0), 1e-12);
}

TEST(Clarity, SingleEntryCollapsesToOneCosine) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 100; ++trial) {
    keyphrase::TokenCounts fq, cq;
    for (const auto& t : vocab) {
      if (int c = static_cast<int>(rng() % 4)) fq[t] = c;
      if (int c = static_cast<int>(rng() % 4)) cq[t] = c;
    }
    const double sim = 0.5 + static_cast<double>(rng() % 100) / 10.0;
    const std::vector<WeightedVector> entries = {{cq, sim}};
    const auto s = combine_clarity(fq, entries);
    EXPECT_NEAR(s.global, s.individual, 1e-12);
    EXPECT_NEAR(s.weighted, sim * s.individual, 1e-12);
  }
}

TEST(Clarity, UnitSimilaritiesMakeWeightedEqualIndividual) {
  std::mt19937_64 rng(12);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 100; ++trial) {
    keyphrase::TokenCounts fq;
    for (const auto& t : vocab) {
      if (int c = static_cast<int>(rng() % 3)) fq[t] = c;
    }
    std::vector<WeightedVector> entries(1 + rng() % 8);
    for (auto& e : entries) {
      e.similarity = 1.0;
      for (const auto& t : vocab) {
        if (int c = static_cast<int>(rng() % 3)) e.counts[t] = c;
      }
    }
    const auto s = combine_clarity(fq, entries);
    EXPECT_NEAR(s.weighted, s.individual, 1e-12);
  }
}

TEST(Clarity, AddingAQuestionTokenCanLowerCosine) {
  const std::vector<WeightedVector> entries = {{{{"a", 1}, {"b", 5}}, 1.0}};
  const auto before = combine_clarity({{"b", 1}}, entries);
  const auto after = combine_clarity({{"a", 1}, {"b", 1}}, entries);
  EXPECT_NEAR(before.individual, 5 / std::sqrt(26.0), 1e-12);
  EXPECT_NEAR(after.individual, 6 / (std::sqrt(2.0) * std::sqrt(26.0)), 1e-12);
  EXPECT_LT(after.individual, before.individual);
}

TEST(Clarity, FirstKeyphraseTokenNeverLowersScores) {
  std::mt19937_64 rng(13);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<WeightedVector> entries(1 + rng() % 4);
    for (auto& e : entries) {
      e.similarity = 1.0 + static_cast<double>(rng() % 10);
      for (const auto& t : vocab) {
        if (int c = static_cast<int>(rng() % 3)) e.counts[t] = c;
      }
    }
    const auto zero = combine_clarity({}, entries);
    const auto one = combine_clarity({{vocab[rng() % vocab.size()], 1}}, entries);
    EXPECT_GE(one.global, zero.global);
    EXPECT_GE(one.individual, zero.individual);
    EXPECT_GE(one.weighted, zero.weighted);
  }
}

TEST(Clarity, GlobalIsNotMonotoneInEntries) {
  const keyphrase::TokenCounts fq = {{"b", 1}};
  std::vector<WeightedVector> entries = {{{{"a", 1}, {"b", 5}}, 1.0}};
  const auto one = combine_clarity(fq, entries);
  EXPECT_NEAR(one.global, 5 / std::sqrt(26.0), 1e-12);
  entries.push_back({{{"a", 3}}, 1.0});
  const auto two = combine_clarity(fq, entries);
  EXPECT_NEAR(two.global, 5 / std::sqrt(41.0), 1e-12);
  EXPECT_LT(two.global, one.global);
  // Individual and weighted sum non-negative terms.
  EXPECT_GE(two.individual, one.individual);
  EXPECT_GE(two.weighted, one.weighted);
}

TEST(Clarity, NoOverlapIsZero) {
  ClarificationSet cq;
  ClarificationEntry e;
  e.source = {1, 3.0, Label::unclear};
  e.tokens = {{"os", 1}};
  cq.entries.push_back(e);
  const std::vector<std::string> q = {"printer", "jam"};
  const auto s = clarity_scores(q, cq);
  EXPECT_EQ(s.global, 0);
  EXPECT_EQ(s.individual, 0);
  EXPECT_EQ(s.weighted, 0);
  EXPECT_EQ(clarity_scores(q, ClarificationSet{}).global, 0);
}

TEST(Clarity, QuestionVectorCountsOccurrences) {
  ClarificationSet cq;
  ClarificationEntry e;
  e.source = {1, 1.0, Label::unclear};
  e.tokens = {{"windows", 1}, {"version", 1}};
  cq.entries.push_back(e);
  const std::vector<std::string> q = {"windows", "windows", "laptop"};
  // f(q) = {windows: 2}; cos = 2 / (2 * sqrt 2)
  EXPECT_NEAR(clarity_scores(q, cq).individual, 1 / std::sqrt(2.0), 1e-12);
}

TEST(Clarification, UsesFirstUnclearHitsOnly) {
  std::vector<Question> training;
  for (int i = 1; i <= 12; ++i) {
    auto q = testing::make_question(i, {"t"}, Label::unclear);
    q.clarification_texts = {"Which version " + std::to_string(i) + " exactly?"};
    training.push_back(q);
  }
  const ClarificationLibrary library(training, testing::stopwords());
  std::vector<ScoredHit> hits;
  for (int i = 1; i <= 12; ++i) hits.push_back({i, 20.0 - i, Label::unclear});
  hits.insert(hits.begin(), ScoredHit{99, 100.0, Label::clear});
  const auto cq = build_clarification_set(hits, library, 10);
  ASSERT_EQ(cq.entries.size(), 10u);
  EXPECT_EQ(cq.entries.front().source.doc_id, 1);
  EXPECT_EQ(cq.entries.back().source.doc_id, 10);
  EXPECT_FALSE(cq.entries.front().tokens.empty());
}

TEST(FeatureNames, Layout) {
  const auto names = feature_names(default_k_list());
  ASSERT_EQ(names.size(), 29u);
  EXPECT_EQ(names[0], "Len");
  EXPECT_EQ(names[4], "Readability");
  EXPECT_EQ(names[8], "LenSim@10");
  EXPECT_EQ(names[13], "Fraction@10");
  EXPECT_EQ(names[14], "LenSim@20");
  EXPECT_EQ(names[20], "LenSim@50");
  EXPECT_EQ(names[26], "CQGlobal");
  EXPECT_EQ(names[28], "CQWeighted");
}

TEST(FeatureCsv, HeaderAndRows) {
  const std::vector<std::string> names = {"A", "B"};
  const std::vector<FeatureRow> rows = {{7, {1.5, -2}, Label::unclear}};
  std::ostringstream out;
  write_feature_csv(out, names, rows);
  EXPECT_EQ(out.str(), "id,A,B,label\n7,1.5,-2,1\n");
  const std::vector<FeatureRow> bad = {{7, {1.5}, Label::clear}};
  std::ostringstream sink;
  EXPECT_THROW(write_feature_csv(sink, names, bad), Error);
}

class ExtractorTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto add = [&](std::int64_t id, std::vector<std::string> toks, Label l, std::string cq = {}) {
      auto q = testing::make_question(id, std::move(toks), l);
      q.raw_text = "some text here.";
      if (!cq.empty()) q.clarification_texts = {cq};
      training_.push_back(q);
    };
    add(1, {"laptop", "battery", "drain"}, Label::unclear, "Which laptop model?");
    add(2, {"laptop", "screen", "flicker"}, Label::clear);
    add(3, {"zfs", "pool", "import"}, Label::unclear, "What zfs version?");
    add(4, {"laptop", "battery", "charge"}, Label::unclear, "Which operating system?");
    add(5, {"git", "rebase", "conflict"}, Label::clear);
    index_.emplace(retrieval::build_index(training_));
  }

  std::vector<Question> training_;
  std::optional<retrieval::InvertedIndex> index_;
};

TEST_F(ExtractorTest, ValuesMatchComponents) {
  const SqmExtractor ex(*index_, training_, testing::stopwords());
  auto q = testing::make_question(100, {"laptop", "battery", "?"});
  q.raw_text = "laptop battery?";
  const auto r = ex.extract(q, std::nullopt);
  ASSERT_EQ(r.values.size(), ex.names().size());
  ASSERT_EQ(r.hits.size(), 3u);  // docs 1, 2, 4
  EXPECT_EQ(r.values[0], 3);
  EXPECT_EQ(r.values[3], 1);
  const auto sf = similarity_features(r.hits, ex.options().k_list);
  EXPECT_EQ(r.values[5], sf.sim_sum);
  EXPECT_EQ(r.values[9], sf.per_k[0].len_unclear);
  EXPECT_EQ(r.values[9], 2);
  const auto cs = clarity_scores(q.tokens, r.clarifications);
  EXPECT_EQ(r.values[26], cs.global);
  EXPECT_EQ(r.values[28], cs.weighted);
  EXPECT_GT(cs.individual, 0);  // "laptop" from "Which laptop model?"
}

TEST_F(ExtractorTest, IndexedQuestionDoesNotRetrieveItself) {
  const SqmExtractor ex(*index_, training_, testing::stopwords());
  const auto r = ex.extract(training_[0]);
  for (const auto& h : r.hits) EXPECT_NE(h.doc_id, 1);
}

}  // namespace
}  // namespace clarity::features
