#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clarity/dump.hpp"

namespace clarity {

enum class Label : int { clear = 0, unclear = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
inline Label label_from_int(int v) { return v ? Label::unclear : Label::clear; }
std::string_view label_name(Label l);

// A labeled, preprocessed question; the unit of classification.
struct Question {
  std::int64_t id = 0;
  std::vector<std::string> tokens;  // title + body + tags
  std::vector<std::string> title_tokens;
  std::vector<std::string> tag_tokens;
  Label label = Label::clear;
  std::vector<std::string> clarification_texts;  // empty iff clear
  bool contains_pre = false;
  bool contains_quote = false;
  std::string raw_text;  // HTML-stripped title + body
};

}  // namespace clarity

namespace clarity::corpus {

// Output of the clear/unclear heuristic before text preprocessing.
struct LabeledCandidate {
  const dump::RawPost* post = nullptr;
  Label label = Label::clear;
  std::vector<std::string> clarification_texts;
};

struct LabelCounts {
  std::size_t questions = 0;
  std::size_t clear = 0;
  std::size_t unclear = 0;
  std::size_t discarded_no_owner = 0;
  std::size_t discarded_no_response = 0;  // clarification asked, owner silent
  std::size_t discarded_unmatched = 0;    // neither heuristic applies
};

struct LabelResult {
  std::vector<LabeledCandidate> candidates;  // ascending question id
  LabelCounts counts;
};

// Unclear: a non-owner comment with a sentence ending in '?', followed
// strictly later by an owner comment or an owner title/body/tag edit.
// Clear: no comments, no edits, accepted answer present. Otherwise dropped.
LabelResult label_questions(std::span<const dump::RawPost> posts,
                            std::span<const dump::RawComment> comments,
                            std::span<const dump::RawEdit> edits);

// Question-sentences of a comment, in order.
std::vector<std::string> question_sentences(std::string_view comment_text);

struct BuildCounts {
  std::size_t empty_after_preprocessing = 0;
};

// Preprocesses labeled candidates into questions; empty ones are dropped.
std::vector<Question> build_questions(std::span<const LabeledCandidate> candidates,
                                      BuildCounts* counts = nullptr);

struct CorpusSplit {
  std::vector<std::int64_t> train;
  std::vector<std::int64_t> dev;
  std::vector<std::int64_t> test;
  std::uint64_t seed = 0;
};

// 80/20 train+dev/test, then 20% of the remainder as dev. Each list is
// returned in ascending id order. Requires at least 10 ids.
CorpusSplit split_corpus(std::span<const std::int64_t> ids, std::uint64_t seed);

// Throws LeakageError if any two partitions share an id.
void check_disjoint(const CorpusSplit& split);

class Vocabulary {
 public:
  static constexpr std::size_t kDefaultMinDf = 3;

  // Counts document frequency over the given token lists.
  static Vocabulary build(std::span<const std::vector<std::string>* const> docs,
                          std::size_t min_df = kDefaultMinDf);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t min_df() const noexcept { return min_df_; }
  // Id of term, or unk_id() when absent.
  std::uint32_t lookup(std::string_view term) const;
  std::uint32_t unk_id() const noexcept { return static_cast<std::uint32_t>(terms_.size()); }
  bool contains(std::string_view term) const;
  std::size_t df(std::string_view term) const;
  const std::vector<std::string>& terms() const noexcept { return terms_; }

 private:
  std::vector<std::string> terms_;  // sorted; id = position
  std::vector<std::size_t> dfs_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::size_t min_df_ = kDefaultMinDf;
};

// Vocabulary over the training partition only. Throws on an empty split.
Vocabulary build_vocabulary(std::span<const Question> questions,
                            std::span<const std::int64_t> train_ids,
                            std::size_t min_df = Vocabulary::kDefaultMinDf);

// Columns of the dataset-statistics table.
struct CorpusStats {
  std::size_t n = 0;
  double median_length = 0;
  std::size_t vocabulary = 0;      // |V|
  std::size_t vocabulary_min_df = 0;  // |V*|
  double clear_share = 0;
  double unclear_share = 0;
};

CorpusStats compute_stats(std::span<const Question> questions);

// Newline-delimited JSON, one question per line.
void write_questions(std::ostream& out, std::span<const Question> questions);
std::vector<Question> read_questions(std::istream& in);

std::string question_to_json(const Question& q);
Question question_from_json(std::string_view line);

// Lookup by id over a question list.
class QuestionTable {
 public:
  QuestionTable() = default;
  explicit QuestionTable(std::span<const Question> questions);
  const Question* find(std::int64_t id) const;
  const Question& at(std::int64_t id) const;

 private:
  std::unordered_map<std::int64_t, const Question*> by_id_;
};

}  // namespace clarity::corpus
