#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace clarity::eval {

// Positive class = unclear (1).
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
};

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels);

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double accuracy = 0;
};

// 0/0 is 0.
Prf prf(const ConfusionCounts& c);

// Probability that a random positive outranks a random negative, ties
// counting one half. Computed from average ranks. Throws on one class.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct Metrics {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::optional<double> roc_auc;  // absent when the labels hold one class
};

// Predictions, scores (higher = more unclear) and labels of one system on
// one dataset.
struct SystemOutput {
  std::vector<int> predictions;
  std::vector<double> scores;
  std::vector<int> labels;
};

Metrics compute_metrics(const SystemOutput& out);

struct MetricReport {
  std::vector<Metrics> per_community;
  Metrics micro;
  Metrics macro;
};

// Micro pools every item; macro averages the per-community metrics.
MetricReport summarize(std::span<const SystemOutput> communities);

enum class MetricKind { accuracy, precision, recall, f1, roc_auc };

std::string metric_name(MetricKind m);

// Metric of one system's per-item outputs. Label-based metrics threshold
// nothing: they read predictions; roc_auc reads scores.
double metric_value(MetricKind m, std::span<const int> predictions, std::span<const double> scores,
                    std::span<const int> labels);

struct RandomizationResult {
  double observed_delta = 0;
  double p_value = 1;
  std::size_t rounds = 0;
};

// Swaps the two systems' outputs per item with probability 1/2, R times;
// p = (1 + #{delta_r >= delta}) / (1 + R). Round r draws from its own
// generator seeded from (seed, r), so threading does not change results.
RandomizationResult approx_randomization(const SystemOutput& a, const SystemOutput& b,
                                         MetricKind metric, std::size_t rounds,
                                         std::uint64_t seed, unsigned threads = 1);

// "^" / "^^" improvement at p<0.05 / p<0.01, "v" / "vv" deterioration,
// "o" not significant.
std::string significance_marker(double delta, double p_value);

// Features by descending weight; positive weights indicate unclear.
std::vector<std::pair<std::string, double>> coefficient_report(
    std::span<const std::string> names, std::span<const double> weights);

}  // namespace clarity::eval
