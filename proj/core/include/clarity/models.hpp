#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "clarity/bow.hpp"
#include "clarity/corpus.hpp"
#include "clarity/retrieval.hpp"

namespace clarity::models {

using features::SparseVector;

// Compressed sparse rows. Dense feature matrices are stored with every
// column present.
class SparseMatrix {
 public:
  explicit SparseMatrix(std::size_t cols = 0) : cols_(cols) {}

  static SparseMatrix from_dense(std::span<const std::vector<double>> rows);

  void add_row(const SparseVector& row);
  void add_dense_row(std::span<const double> row);

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  double row_dot(std::size_t r, std::span<const double> w) const;
  // out += scale * row r
  void row_axpy(std::size_t r, double scale, std::span<double> out) const;

 private:
  std::size_t cols_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

// Per-column mean and population standard deviation of the training rows.
// Zero deviations are stored as 1, so constant columns map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(std::span<const std::vector<double>> rows);
  std::vector<double> apply(std::span<const double> row) const;
  std::vector<std::vector<double>> apply(std::span<const std::vector<double>> rows) const;
};

struct LrOptions {
  double C = 1.0;
  std::size_t max_iterations = 1000;
  double gradient_tolerance = 1e-5;
};

// 0.5 ||w||^2 + C sum_i ln(1 + exp(-y_i (w.x_i + b))), y_i in {-1, +1};
// the bias is not penalized.
double lr_objective(const SparseMatrix& x, std::span<const int> labels, double C,
                    std::span<const double> w, double b);

struct LrGradient {
  std::vector<double> w;
  double b = 0;
};

LrGradient lr_gradient(const SparseMatrix& x, std::span<const int> labels, double C,
                       std::span<const double> w, double b);

struct LogRegModel {
  std::vector<double> weights;
  double bias = 0;
  double C = 1.0;
  std::vector<std::string> feature_names;

  double decision(std::span<const double> x) const;
  double decision(const SparseVector& x) const;
  double predict_proba(std::span<const double> x) const;
  double predict_proba(const SparseVector& x) const;
  Label predict(std::span<const double> x) const;
  Label predict(const SparseVector& x) const;
};

struct LrTrace {
  std::vector<double> objective;  // initial value, then one per iteration
  std::size_t iterations = 0;
  bool converged = false;
};

// Full-batch gradient descent with Armijo backtracking from w = 0, b = 0.
// Stops when the gradient's infinity norm drops below the tolerance or the
// iteration budget is spent. Throws if only one class is present.
LogRegModel lr_train(const SparseMatrix& x, std::span<const int> labels,
                     const LrOptions& options = {}, LrTrace* trace = nullptr);

double sigmoid(double z);

// Predicts clear (0) iff the feature value is >= gamma.
struct ThresholdModel {
  std::string feature;
  double gamma = 0;

  Label predict(double value) const { return value >= gamma ? Label::clear : Label::unclear; }
};

struct ThresholdFit {
  ThresholdModel model;
  double dev_accuracy = 0;
};

// Scans -inf, the midpoints of consecutive distinct values and +inf; keeps
// the most accurate, the smallest gamma on ties.
ThresholdFit threshold_fit(std::span<const double> values, std::span<const int> labels,
                           const std::string& feature);

inline constexpr std::size_t kSimqMajorityDepth = 10;

// Most common label among the top hits; ties and empty sets fall back.
Label simq_majority(std::span<const retrieval::ScoredHit> hits, Label fallback = Label::unclear,
                    std::size_t k = kSimqMajorityDepth);

// Share of unclear labels among the top hits, 0.5 when empty.
double simq_unclear_share(std::span<const retrieval::ScoredHit> hits,
                          std::size_t k = kSimqMajorityDepth);

Label majority_label(std::span<const int> training_labels);

// Fair coin. Same seed, same sequence.
class RandomBaseline {
 public:
  explicit RandomBaseline(std::uint64_t seed) : rng_(seed) {}

  struct Draw {
    double score;
    Label label;
  };

  Draw next();

 private:
  std::mt19937_64 rng_;
};

}  // namespace clarity::models
