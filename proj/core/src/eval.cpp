#include "clarity/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "clarity/error.hpp"

namespace clarity::eval {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw InputError("prediction and label counts differ");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels) {
  check_lengths(predictions.size(), labels.size());
  if (labels.empty()) throw InputError("cannot evaluate an empty prediction set");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] != 0;
    const bool y = labels[i] != 0;
    if (p && y) ++c.tp;
    else if (p) ++c.fp;
    else if (y) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Prf prf(const ConfusionCounts& c) {
  Prf r;
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.f1 = (r.precision + r.recall) == 0 ? 0.0
                                       : 2 * r.precision * r.recall / (r.precision + r.recall);
  r.accuracy = ratio(c.tp + c.tn, c.total());
  return r;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size());
  std::size_t pos = 0;
  for (int y : labels) pos += y ? 1 : 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw InputError("ROC AUC needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1) / 2.0) / (p * static_cast<double>(neg));
}

Metrics compute_metrics(const SystemOutput& out) {
  const auto r = prf(confusion(out.predictions, out.labels));
  Metrics m{r.accuracy, r.precision, r.recall, r.f1, std::nullopt};
  const bool has_pos = std::any_of(out.labels.begin(), out.labels.end(), [](int y) { return y; });
  const bool has_neg = std::any_of(out.labels.begin(), out.labels.end(), [](int y) { return !y; });
  if (has_pos && has_neg) m.roc_auc = roc_auc(out.scores, out.labels);
  return m;
}

MetricReport summarize(std::span<const SystemOutput> communities) {
  if (communities.empty()) throw InputError("summarize needs at least one community");
  MetricReport report;
  SystemOutput pooled;
  double auc_sum = 0;
  std::size_t auc_count = 0;
  for (const auto& c : communities) {
    report.per_community.push_back(compute_metrics(c));
    const auto& m = report.per_community.back();
    report.macro.accuracy += m.accuracy;
    report.macro.precision += m.precision;
    report.macro.recall += m.recall;
    report.macro.f1 += m.f1;
    if (m.roc_auc) {
      auc_sum += *m.roc_auc;
      ++auc_count;
    }
    pooled.predictions.insert(pooled.predictions.end(), c.predictions.begin(), c.predictions.end());
    pooled.scores.insert(pooled.scores.end(), c.scores.begin(), c.scores.end());
    pooled.labels.insert(pooled.labels.end(), c.labels.begin(), c.labels.end());
  }
  const double n = static_cast<double>(communities.size());
  report.macro.accuracy /= n;
  report.macro.precision /= n;
  report.macro.recall /= n;
  report.macro.f1 /= n;
  if (auc_count) report.macro.roc_auc = auc_sum / static_cast<double>(auc_count);
  report.micro = compute_metrics(pooled);
  return report;
}

std::string metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::accuracy: return "accuracy";
    case MetricKind::precision: return "precision";
    case MetricKind::recall: return "recall";
    case MetricKind::f1: return "f1";
    case MetricKind::roc_auc: return "roc_auc";
  }
  return "unknown";
}

double metric_value(MetricKind m, std::span<const int> predictions, std::span<const double> scores,
                    std::span<const int> labels) {
  if (m == MetricKind::roc_auc) return roc_auc(scores, labels);
  const auto r = prf(confusion(predictions, labels));
  switch (m) {
    case MetricKind::accuracy: return r.accuracy;
    case MetricKind::precision: return r.precision;
    case MetricKind::recall: return r.recall;
    case MetricKind::f1: return r.f1;
    case MetricKind::roc_auc: break;
  }
  return 0;
}

RandomizationResult approx_randomization(const SystemOutput& a, const SystemOutput& b,
                                         MetricKind metric, std::size_t rounds,
                                         std::uint64_t seed, unsigned threads) {
  const std::size_t n = a.labels.size();
  check_lengths(a.predictions.size(), n);
  check_lengths(b.predictions.size(), n);
  check_lengths(b.labels.size(), n);
  check_lengths(a.scores.size(), n);
  check_lengths(b.scores.size(), n);
  if (a.labels != b.labels) throw InputError("systems were evaluated on different labels");

  RandomizationResult result;
  result.rounds = rounds;
  result.observed_delta = std::abs(metric_value(metric, a.predictions, a.scores, a.labels) -
                                   metric_value(metric, b.predictions, b.scores, b.labels));

  auto run_rounds = [&](std::size_t begin, std::size_t end) {
    std::vector<int> pa(n), pb(n);
    std::vector<double> sa(n), sb(n);
    std::size_t at_least = 0;
    for (std::size_t r = begin; r < end; ++r) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(r)));
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) bits = rng();
        const bool swap = (bits >> (i % 64)) & 1U;
        pa[i] = swap ? b.predictions[i] : a.predictions[i];
        pb[i] = swap ? a.predictions[i] : b.predictions[i];
        sa[i] = swap ? b.scores[i] : a.scores[i];
        sb[i] = swap ? a.scores[i] : b.scores[i];
      }
      const double delta = std::abs(metric_value(metric, pa, sa, a.labels) -
                                    metric_value(metric, pb, sb, a.labels));
      if (delta >= result.observed_delta) ++at_least;
    }
    return at_least;
  };

  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rounds, 1))));
  std::size_t at_least = 0;
  if (threads == 1) {
    at_least = run_rounds(0, rounds);
  } else {
    std::vector<std::size_t> counts(threads, 0);
    std::vector<std::thread> pool;
    const std::size_t chunk = (rounds + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(rounds, t * chunk);
      const std::size_t end = std::min(rounds, begin + chunk);
      pool.emplace_back([&, t, begin, end] { counts[t] = run_rounds(begin, end); });
    }
    for (auto& th : pool) th.join();
    for (auto c : counts) at_least += c;
  }
  result.p_value = static_cast<double>(1 + at_least) / static_cast<double>(1 + rounds);
  return result;
}

std::string significance_marker(double delta, double p_value) {
  if (p_value < 0.01) return delta > 0 ? "^^" : "vv";
  if (p_value < 0.05) return delta > 0 ? "^" : "v";
  return "o";
}

std::vector<std::pair<std::string, double>> coefficient_report(std::span<const std::string> names,
                                                               std::span<const double> weights) {
  if (names.size() != weights.size()) throw InputError("coefficient names and weights differ in length");
  std::vector<std::pair<std::string, double>> out;
  out.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) out.emplace_back(names[i], weights[i]);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace clarity::eval
