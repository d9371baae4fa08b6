#include "clarity/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clarity/error.hpp"

namespace clarity::models {
namespace {

// ln(1 + exp(m)) without overflow.
double softplus(double m) { return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m)); }

double signed_label(int y) { return y ? 1.0 : -1.0; }

void check_dims(const SparseMatrix& x, std::span<const int> labels, std::span<const double> w) {
  if (x.rows() != labels.size()) throw InputError("label count does not match row count");
  if (x.cols() != w.size()) throw InputError("weight dimension does not match feature dimension");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Objective and margins z_i = w.x_i + b in one pass.
double objective_with_margins(const SparseMatrix& x, std::span<const int> labels, double C,
                              std::span<const double> w, double b, std::vector<double>& margins) {
  margins.resize(x.rows());
  double loss = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    margins[i] = x.row_dot(i, w) + b;
    loss += softplus(-signed_label(labels[i]) * margins[i]);
  }
  return 0.5 * dot(w, w) + C * loss;
}

LrGradient gradient_from_margins(const SparseMatrix& x, std::span<const int> labels, double C,
                                 std::span<const double> w, std::span<const double> margins) {
  LrGradient g;
  g.w.assign(w.begin(), w.end());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double y = signed_label(labels[i]);
    // d/dz softplus(-y z) = -y * sigmoid(-y z)
    const double coeff = -y * sigmoid(-y * margins[i]) * C;
    g.b += coeff;
    x.row_axpy(i, coeff, g.w);
  }
  return g;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

SparseMatrix SparseMatrix::from_dense(std::span<const std::vector<double>> rows) {
  SparseMatrix m(rows.empty() ? 0 : rows.front().size());
  for (const auto& r : rows) m.add_dense_row(r);
  return m;
}

void SparseMatrix::add_row(const SparseVector& row) {
  for (std::size_t i = 0; i < row.nnz(); ++i) {
    if (row.index[i] >= cols_) throw InputError("sparse row index out of range");
    col_idx_.push_back(row.index[i]);
    values_.push_back(row.value[i]);
  }
  row_ptr_.push_back(values_.size());
}

void SparseMatrix::add_dense_row(std::span<const double> row) {
  if (row.size() != cols_) throw InputError("dense row width does not match matrix");
  for (std::size_t j = 0; j < row.size(); ++j) {
    col_idx_.push_back(static_cast<std::uint32_t>(j));
    values_.push_back(row[j]);
  }
  row_ptr_.push_back(values_.size());
}

double SparseMatrix::row_dot(std::size_t r, std::span<const double> w) const {
  double s = 0;
  for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * w[col_idx_[k]];
  return s;
}

void SparseMatrix::row_axpy(std::size_t r, double scale, std::span<double> out) const {
  for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
    out[col_idx_[k]] += scale * values_[k];
  }
}

Standardizer Standardizer::fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw InputError("cannot fit a standardizer on an empty matrix");
  const std::size_t d = rows.front().size();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (const auto& r : rows) {
    if (r.size() != d) throw InputError("ragged feature matrix");
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : s.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = r[j] - s.mean[j];
      s.stddev[j] += c * c;
    }
  }
  for (auto& v : s.stddev) {
    v = std::sqrt(v / n);
    if (v == 0.0) v = 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
  if (row.size() != mean.size()) throw InputError("feature dimension does not match standardizer");
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
  return out;
}

std::vector<std::vector<double>> Standardizer::apply(std::span<const std::vector<double>> rows) const {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(apply(r));
  return out;
}

double lr_objective(const SparseMatrix& x, std::span<const int> labels, double C,
                    std::span<const double> w, double b) {
  check_dims(x, labels, w);
  std::vector<double> margins;
  return objective_with_margins(x, labels, C, w, b, margins);
}

LrGradient lr_gradient(const SparseMatrix& x, std::span<const int> labels, double C,
                       std::span<const double> w, double b) {
  check_dims(x, labels, w);
  std::vector<double> margins;
  objective_with_margins(x, labels, C, w, b, margins);
  return gradient_from_margins(x, labels, C, w, margins);
}

LogRegModel lr_train(const SparseMatrix& x, std::span<const int> labels, const LrOptions& options,
                     LrTrace* trace) {
  if (options.C <= 0) throw InputError("regularization C must be positive");
  if (x.rows() != labels.size()) throw InputError("label count does not match row count");
  const bool has_pos = std::any_of(labels.begin(), labels.end(), [](int y) { return y != 0; });
  const bool has_neg = std::any_of(labels.begin(), labels.end(), [](int y) { return y == 0; });
  if (!has_pos || !has_neg) throw InputError("logistic regression needs both classes in training");

  const std::size_t d = x.cols();
  std::vector<double> w(d, 0.0), w_next(d);
  double b = 0.0;
  std::vector<double> margins, margins_next;
  double f = objective_with_margins(x, labels, options.C, w, b, margins);
  LrTrace local;
  local.objective.push_back(f);

  double step = 1.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    auto g = gradient_from_margins(x, labels, options.C, w, margins);
    double g_inf = std::abs(g.b);
    double g_sq = g.b * g.b;
    for (double v : g.w) {
      g_inf = std::max(g_inf, std::abs(v));
      g_sq += v * v;
    }
    if (g_inf < options.gradient_tolerance) {
      local.converged = true;
      break;
    }
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    double f_next = f;
    double b_next = b;
    while (step > 1e-20) {
      for (std::size_t j = 0; j < d; ++j) w_next[j] = w[j] - step * g.w[j];
      b_next = b - step * g.b;
      f_next = objective_with_margins(x, labels, options.C, w_next, b_next, margins_next);
      if (f_next <= f - 1e-4 * step * g_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    w.swap(w_next);
    b = b_next;
    margins.swap(margins_next);
    f = f_next;
    local.objective.push_back(f);
    local.iterations = it + 1;
  }
  if (trace) *trace = std::move(local);
  LogRegModel model;
  model.weights = std::move(w);
  model.bias = b;
  model.C = options.C;
  return model;
}

double LogRegModel::decision(std::span<const double> x) const {
  if (x.size() != weights.size()) throw InputError("feature dimension does not match model");
  return dot(weights, x) + bias;
}

double LogRegModel::decision(const SparseVector& x) const {
  double s = bias;
  for (std::size_t i = 0; i < x.nnz(); ++i) {
    if (x.index[i] >= weights.size()) throw InputError("feature index outside model dimension");
    s += weights[x.index[i]] * x.value[i];
  }
  return s;
}

double LogRegModel::predict_proba(std::span<const double> x) const { return sigmoid(decision(x)); }
double LogRegModel::predict_proba(const SparseVector& x) const { return sigmoid(decision(x)); }

Label LogRegModel::predict(std::span<const double> x) const {
  return predict_proba(x) >= 0.5 ? Label::unclear : Label::clear;
}

Label LogRegModel::predict(const SparseVector& x) const {
  return predict_proba(x) >= 0.5 ? Label::unclear : Label::clear;
}

ThresholdFit threshold_fit(std::span<const double> values, std::span<const int> labels,
                           const std::string& feature) {
  if (values.size() != labels.size()) throw InputError("value/label count mismatch");
  if (values.empty()) throw InputError("threshold fitting needs a nonempty dev set");
  std::vector<std::pair<double, int>> pts;
  pts.reserve(values.size());
  std::size_t total_unclear = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    pts.emplace_back(values[i], labels[i] ? 1 : 0);
    total_unclear += labels[i] ? 1 : 0;
  }
  std::sort(pts.begin(), pts.end());
  const double n = static_cast<double>(pts.size());
  const std::size_t total_clear = pts.size() - total_unclear;

  // gamma = -inf: everything predicted clear.
  double best_gamma = -std::numeric_limits<double>::infinity();
  std::size_t best_correct = total_clear;
  // Moving gamma past a block of equal values turns them into "unclear".
  std::size_t clear_below = 0, unclear_below = 0;
  std::size_t i = 0;
  while (i < pts.size()) {
    std::size_t j = i;
    while (j < pts.size() && pts[j].first == pts[i].first) {
      (pts[j].second ? unclear_below : clear_below) += 1;
      ++j;
    }
    const double gamma = j < pts.size() ? (pts[i].first + pts[j].first) / 2.0
                                        : std::numeric_limits<double>::infinity();
    const std::size_t correct = (total_clear - clear_below) + unclear_below;
    if (correct > best_correct) {
      best_correct = correct;
      best_gamma = gamma;
    }
    i = j;
  }
  return {{feature, best_gamma}, static_cast<double>(best_correct) / n};
}

Label simq_majority(std::span<const retrieval::ScoredHit> hits, Label fallback, std::size_t k) {
  std::size_t unclear = 0, clear = 0;
  for (std::size_t i = 0; i < std::min(k, hits.size()); ++i) {
    (hits[i].label == Label::unclear ? unclear : clear) += 1;
  }
  if (unclear > clear) return Label::unclear;
  if (clear > unclear) return Label::clear;
  return fallback;
}

double simq_unclear_share(std::span<const retrieval::ScoredHit> hits, std::size_t k) {
  const std::size_t n = std::min(k, hits.size());
  if (n == 0) return 0.5;
  std::size_t unclear = 0;
  for (std::size_t i = 0; i < n; ++i) unclear += hits[i].label == Label::unclear ? 1 : 0;
  return static_cast<double>(unclear) / static_cast<double>(n);
}

Label majority_label(std::span<const int> training_labels) {
  std::size_t unclear = 0;
  for (int y : training_labels) unclear += y ? 1 : 0;
  return 2 * unclear >= training_labels.size() ? Label::unclear : Label::clear;
}

RandomBaseline::Draw RandomBaseline::next() {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return {u, u >= 0.5 ? Label::unclear : Label::clear};
}

}  // namespace clarity::models
