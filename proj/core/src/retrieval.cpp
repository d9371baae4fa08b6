#include "clarity/retrieval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>

#include "clarity/error.hpp"

namespace clarity::retrieval {
namespace {

constexpr char kMagic[8] = {'C', 'L', 'R', 'I', 'D', 'X', '\0', '\0'};

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::is_integral_v<T>);
  unsigned char bytes[sizeof(T)];
  auto u = static_cast<std::make_unsigned_t<T>>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw InputError("truncated index file");
  }
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u |= static_cast<std::make_unsigned_t<T>>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(u);
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string take_string(std::istream& in) {
  auto n = take<std::uint32_t>(in);
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) throw InputError("truncated index file");
  return s;
}

}  // namespace

double bm25_idf(std::size_t doc_count, std::size_t df) {
  const double n = static_cast<double>(doc_count);
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

std::optional<std::uint32_t> InvertedIndex::doc_number(std::int64_t id) const {
  auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), id);
  if (it == doc_ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - doc_ids_.begin());
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  auto it = term_ids_.find(std::string(term));
  if (it == term_ids_.end()) return {};
  return postings_[it->second];
}

void InvertedIndex::rebuild_lookup() {
  term_ids_.clear();
  term_ids_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    term_ids_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

InvertedIndex build_index(std::span<const Question> training) {
  if (training.empty()) throw InputError("cannot index an empty training set");
  std::vector<const Question*> docs;
  docs.reserve(training.size());
  for (const auto& q : training) docs.push_back(&q);
  std::sort(docs.begin(), docs.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (docs[i]->id == docs[i - 1]->id) {
      throw InputError("duplicate question id " + std::to_string(docs[i]->id) + " in index input");
    }
  }

  InvertedIndex index;
  std::map<std::string, std::vector<Posting>> postings;
  std::map<std::string_view, std::uint32_t> tf;
  double total_length = 0;
  for (std::uint32_t d = 0; d < docs.size(); ++d) {
    const auto& q = *docs[d];
    index.doc_ids_.push_back(q.id);
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(q.tokens.size()));
    index.doc_labels_.push_back(q.label);
    total_length += static_cast<double>(q.tokens.size());
    tf.clear();
    for (const auto& t : q.tokens) ++tf[t];
    for (const auto& [term, count] : tf) postings[std::string(term)].push_back({d, count});
  }
  index.avg_doc_length_ = total_length / static_cast<double>(docs.size());
  index.terms_.reserve(postings.size());
  index.postings_.reserve(postings.size());
  for (auto& [term, list] : postings) {
    index.terms_.push_back(term);
    index.postings_.push_back(std::move(list));
  }
  index.rebuild_lookup();
  return index;
}

void InvertedIndex::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint64_t>(out, doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    put<std::int64_t>(out, doc_ids_[d]);
    put<std::uint32_t>(out, doc_lengths_[d]);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(to_int(doc_labels_[d])));
  }
  put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(avg_doc_length_));
  put<std::uint64_t>(out, terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    put_string(out, terms_[t]);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(postings_[t].size()));
    for (const auto& p : postings_[t]) {
      put<std::uint32_t>(out, p.doc);
      put<std::uint32_t>(out, p.tf);
    }
  }
  if (!out) throw Error("failed to write index");
}

InvertedIndex InvertedIndex::load(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw InputError("not an index file");
  }
  auto version = take<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw InputError("unsupported index format version " + std::to_string(version));
  }
  InvertedIndex index;
  auto n_docs = take<std::uint64_t>(in);
  for (std::uint64_t d = 0; d < n_docs; ++d) {
    index.doc_ids_.push_back(take<std::int64_t>(in));
    index.doc_lengths_.push_back(take<std::uint32_t>(in));
    index.doc_labels_.push_back(label_from_int(take<std::uint8_t>(in)));
  }
  index.avg_doc_length_ = std::bit_cast<double>(take<std::uint64_t>(in));
  auto n_terms = take<std::uint64_t>(in);
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    index.terms_.push_back(take_string(in));
    auto n = take<std::uint32_t>(in);
    std::vector<Posting> list(n);
    for (auto& p : list) {
      p.doc = take<std::uint32_t>(in);
      p.tf = take<std::uint32_t>(in);
      if (p.doc >= n_docs) throw InputError("index posting refers to unknown document");
    }
    index.postings_.push_back(std::move(list));
  }
  index.rebuild_lookup();
  return index;
}

std::vector<std::string> make_query(const Question& question, const text::StopwordList& stopwords) {
  std::vector<std::string> query;
  auto add = [&](const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) {
      if (text::is_punctuation_token(t) || stopwords.contains(t)) continue;
      query.push_back(t);
    }
  };
  add(question.title_tokens);
  add(question.tag_tokens);
  return query;
}

std::vector<ScoredHit> search(const InvertedIndex& index, std::span<const std::string> query,
                              std::size_t k, std::optional<std::int64_t> exclude_id,
                              const Bm25Params& params) {
  if (k < 1) throw InputError("search depth k must be at least 1");
  const std::size_t n = index.doc_count();
  std::vector<double> acc(n, 0.0);
  std::vector<std::uint32_t> touched;
  const double avgdl = index.avg_doc_length();
  const double k1 = params.k1;
  const double b = params.b;
  for (const auto& term : query) {
    auto list = index.postings(term);
    if (list.empty()) continue;
    const double idf = bm25_idf(n, list.size());
    for (const auto& p : list) {
      const double tf = p.tf;
      const double dl = index.doc_length(p.doc);
      if (acc[p.doc] == 0.0) touched.push_back(p.doc);
      acc[p.doc] += idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * dl / avgdl));
    }
  }
  std::optional<std::uint32_t> excluded;
  if (exclude_id) excluded = index.doc_number(*exclude_id);

  std::vector<std::uint32_t> candidates;
  candidates.reserve(touched.size());
  for (auto d : touched) {
    if (acc[d] > 0.0 && d != excluded) candidates.push_back(d);
  }
  auto better = [&](std::uint32_t a, std::uint32_t c) {
    if (acc[a] != acc[c]) return acc[a] > acc[c];
    return a < c;
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), better);
  std::vector<ScoredHit> hits;
  hits.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    auto d = candidates[i];
    hits.push_back({index.doc_id(d), acc[d], index.doc_label(d)});
  }
  return hits;
}

}  // namespace clarity::retrieval
