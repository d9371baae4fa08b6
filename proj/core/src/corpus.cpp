#include "clarity/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

#include "clarity/error.hpp"
#include "clarity/text.hpp"
#include "json.hpp"

namespace clarity {

std::string_view label_name(Label l) { return l == Label::unclear ? "unclear" : "clear"; }

}  // namespace clarity

namespace clarity::corpus {
namespace {

using json = nlohmann::ordered_json;

bool is_owner(const std::optional<std::int64_t>& user, std::int64_t owner) {
  return user && *user == owner;
}

// Unbiased draw in [0, bound).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::vector<std::string> question_sentences(std::string_view comment_text) {
  std::vector<std::string> out;
  for (auto& s : text::split_sentences(comment_text)) {
    if (text::ends_with_question_mark(s)) out.push_back(std::move(s));
  }
  return out;
}

LabelResult label_questions(std::span<const dump::RawPost> posts,
                            std::span<const dump::RawComment> comments,
                            std::span<const dump::RawEdit> edits) {
  std::unordered_map<std::int64_t, std::vector<const dump::RawComment*>> comments_by_post;
  std::unordered_map<std::int64_t, std::vector<const dump::RawEdit*>> edits_by_post;
  for (const auto& c : comments) comments_by_post[c.post_id].push_back(&c);
  for (const auto& e : edits) {
    if (e.kind != dump::EditKind::other) edits_by_post[e.post_id].push_back(&e);
  }

  std::vector<const dump::RawPost*> questions;
  for (const auto& p : posts) {
    if (p.post_type == dump::PostType::question) questions.push_back(&p);
  }
  std::sort(questions.begin(), questions.end(),
            [](const auto* a, const auto* b) { return a->id < b->id; });

  static const std::vector<const dump::RawComment*> kNoComments;
  static const std::vector<const dump::RawEdit*> kNoEdits;

  LabelResult result;
  for (const auto* q : questions) {
    ++result.counts.questions;
    if (!q->owner_user_id) {
      ++result.counts.discarded_no_owner;
      continue;
    }
    const std::int64_t owner = *q->owner_user_id;
    auto cit = comments_by_post.find(q->id);
    auto eit = edits_by_post.find(q->id);
    auto q_comments = cit == comments_by_post.end() ? kNoComments : cit->second;
    const auto& q_edits = eit == edits_by_post.end() ? kNoEdits : eit->second;
    std::stable_sort(q_comments.begin(), q_comments.end(), [](const auto* a, const auto* b) {
      return a->creation_date < b->creation_date;
    });

    std::optional<dump::Timestamp> first_request;
    std::vector<std::string> clarifications;
    for (const auto* c : q_comments) {
      if (is_owner(c->user_id, owner)) continue;
      auto sentences = question_sentences(c->text);
      if (sentences.empty()) continue;
      if (!first_request) first_request = c->creation_date;
      for (auto& s : sentences) clarifications.push_back(std::move(s));
    }

    if (first_request) {
      bool responded = std::any_of(q_comments.begin(), q_comments.end(), [&](const auto* c) {
        return is_owner(c->user_id, owner) && c->creation_date > *first_request;
      });
      responded = responded || std::any_of(q_edits.begin(), q_edits.end(), [&](const auto* e) {
                    return is_owner(e->user_id, owner) && e->creation_date > *first_request;
                  });
      if (responded) {
        result.candidates.push_back({q, Label::unclear, std::move(clarifications)});
        ++result.counts.unclear;
      } else {
        ++result.counts.discarded_no_response;
      }
      continue;
    }
    if (q_comments.empty() && q_edits.empty() && q->accepted_answer_id) {
      result.candidates.push_back({q, Label::clear, {}});
      ++result.counts.clear;
      continue;
    }
    ++result.counts.discarded_unmatched;
  }
  return result;
}

std::vector<Question> build_questions(std::span<const LabeledCandidate> candidates,
                                      BuildCounts* counts) {
  std::vector<Question> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto& p = *c.post;
    auto pre = text::preprocess(p.title.value_or(""), p.body.value_or(""), p.tags);
    if (pre.tokens.empty()) {
      if (counts) ++counts->empty_after_preprocessing;
      continue;
    }
    Question q;
    q.id = p.id;
    q.tokens = std::move(pre.tokens);
    q.title_tokens = std::move(pre.title_tokens);
    q.tag_tokens = std::move(pre.tag_tokens);
    q.label = c.label;
    q.clarification_texts = c.clarification_texts;
    q.contains_pre = pre.contains_pre;
    q.contains_quote = pre.contains_quote;
    q.raw_text = std::move(pre.raw_text);
    out.push_back(std::move(q));
  }
  return out;
}

CorpusSplit split_corpus(std::span<const std::int64_t> ids, std::uint64_t seed) {
  if (ids.size() < 10) throw InputError("split_corpus needs at least 10 questions");
  std::vector<std::int64_t> order(ids.begin(), ids.end());
  std::sort(order.begin(), order.end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[bounded(rng, i + 1)]);
  }
  const auto n = order.size();
  const auto n_test = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n)));
  const auto n_rest = n - n_test;
  const auto n_dev = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n_rest)));

  CorpusSplit split;
  split.seed = seed;
  split.test.assign(order.begin(), order.begin() + n_test);
  split.dev.assign(order.begin() + n_test, order.begin() + n_test + n_dev);
  split.train.assign(order.begin() + n_test + n_dev, order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.dev.begin(), split.dev.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

void check_disjoint(const CorpusSplit& split) {
  std::unordered_set<std::int64_t> seen;
  auto add = [&](const std::vector<std::int64_t>& ids, std::string_view part) {
    for (auto id : ids) {
      if (!seen.insert(id).second) {
        throw LeakageError("question " + std::to_string(id) + " appears in " +
                           std::string(part) + " and another partition");
      }
    }
  };
  add(split.train, "train");
  add(split.dev, "dev");
  add(split.test, "test");
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>* const> docs,
                             std::size_t min_df) {
  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string_view> seen;
  for (const auto* doc : docs) {
    seen.clear();
    for (const auto& t : *doc) {
      if (seen.insert(t).second) ++df[t];
    }
  }
  Vocabulary v;
  v.min_df_ = min_df;
  for (auto& [term, count] : df) {
    if (count >= min_df) v.terms_.push_back(term);
  }
  std::sort(v.terms_.begin(), v.terms_.end());
  v.dfs_.reserve(v.terms_.size());
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    v.dfs_.push_back(df[v.terms_[i]]);
    v.ids_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
  }
  return v;
}

std::uint32_t Vocabulary::lookup(std::string_view term) const {
  auto it = ids_.find(std::string(term));
  return it == ids_.end() ? unk_id() : it->second;
}

bool Vocabulary::contains(std::string_view term) const { return lookup(term) != unk_id(); }

std::size_t Vocabulary::df(std::string_view term) const {
  auto id = lookup(term);
  return id == unk_id() ? 0 : dfs_[id];
}

Vocabulary build_vocabulary(std::span<const Question> questions,
                            std::span<const std::int64_t> train_ids, std::size_t min_df) {
  if (train_ids.empty()) throw InputError("cannot build a vocabulary from an empty training split");
  std::unordered_set<std::int64_t> wanted(train_ids.begin(), train_ids.end());
  std::vector<const std::vector<std::string>*> docs;
  for (const auto& q : questions) {
    if (wanted.count(q.id)) docs.push_back(&q.tokens);
  }
  if (docs.empty()) throw InputError("training split matches no questions");
  return Vocabulary::build(docs, min_df);
}

CorpusStats compute_stats(std::span<const Question> questions) {
  CorpusStats s;
  s.n = questions.size();
  if (questions.empty()) return s;
  std::vector<std::size_t> lengths;
  std::vector<const std::vector<std::string>*> docs;
  std::unordered_set<std::string_view> all_terms;
  std::size_t clear = 0;
  for (const auto& q : questions) {
    lengths.push_back(q.tokens.size());
    docs.push_back(&q.tokens);
    for (const auto& t : q.tokens) all_terms.insert(t);
    if (q.label == Label::clear) ++clear;
  }
  std::sort(lengths.begin(), lengths.end());
  const auto mid = lengths.size() / 2;
  s.median_length = lengths.size() % 2
                        ? static_cast<double>(lengths[mid])
                        : (static_cast<double>(lengths[mid - 1]) + static_cast<double>(lengths[mid])) / 2.0;
  s.vocabulary = all_terms.size();
  s.vocabulary_min_df = Vocabulary::build(docs).size();
  s.clear_share = static_cast<double>(clear) / static_cast<double>(s.n);
  s.unclear_share = 1.0 - s.clear_share;
  return s;
}

std::string question_to_json(const Question& q) {
  json j;
  j["id"] = q.id;
  j["label"] = to_int(q.label);
  j["tokens"] = q.tokens;
  j["title_tokens"] = q.title_tokens;
  j["tag_tokens"] = q.tag_tokens;
  j["clarification_texts"] = q.clarification_texts;
  j["contains_pre"] = q.contains_pre;
  j["contains_quote"] = q.contains_quote;
  j["raw_text"] = q.raw_text;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

Question question_from_json(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("malformed question record");
  try {
    Question q;
    q.id = j.at("id").get<std::int64_t>();
    q.label = label_from_int(j.at("label").get<int>());
    q.tokens = j.at("tokens").get<std::vector<std::string>>();
    q.title_tokens = j.value("title_tokens", std::vector<std::string>{});
    q.tag_tokens = j.value("tag_tokens", std::vector<std::string>{});
    q.clarification_texts = j.value("clarification_texts", std::vector<std::string>{});
    q.contains_pre = j.value("contains_pre", false);
    q.contains_quote = j.value("contains_quote", false);
    q.raw_text = j.value("raw_text", std::string{});
    return q;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed question record: ") + e.what());
  }
}

void write_questions(std::ostream& out, std::span<const Question> questions) {
  for (const auto& q : questions) out << question_to_json(q) << '\n';
}

std::vector<Question> read_questions(std::istream& in) {
  std::vector<Question> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(question_from_json(line));
  }
  return out;
}

QuestionTable::QuestionTable(std::span<const Question> questions) {
  by_id_.reserve(questions.size());
  for (const auto& q : questions) by_id_.emplace(q.id, &q);
}

const Question* QuestionTable::find(std::int64_t id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

const Question& QuestionTable::at(std::int64_t id) const {
  const auto* q = find(id);
  if (!q) throw InputError("unknown question id " + std::to_string(id));
  return *q;
}

}  // namespace clarity::corpus
