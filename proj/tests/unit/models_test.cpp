#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "clarity/error.hpp"
#include "clarity/models.hpp"

namespace clarity::models {
namespace {

using Rows = std::vector<std::vector<double>>;

struct Problem {
  Rows x;
  std::vector<int> y;
};

Problem random_problem(std::uint64_t seed, std::size_t n, std::size_t d) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Problem p;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(d);
    double s = 0;
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = g(rng);
      s += row[j] * (j % 2 ? -1.0 : 1.0);
    }
    p.x.push_back(row);
    p.y.push_back(s + g(rng) > 0 ? 1 : 0);
  }
  p.y[0] = 1;
  p.y[1] = 0;
  return p;
}

TEST(Standardizer, PopulationDeviation) {
  const Rows rows = {{1, 7}, {2, 7}, {3, 7}};
  const auto s = Standardizer::fit(rows);
  const auto z = s.apply(rows);
  const double d = std::sqrt(2.0 / 3.0);
  EXPECT_NEAR(z[0][0], -1 / d, 1e-12);
  EXPECT_NEAR(z[0][0], -1.224744871, 1e-9);
  EXPECT_NEAR(z[1][0], 0, 1e-12);
  EXPECT_NEAR(z[2][0], 1 / d, 1e-12);
  for (const auto& r : z) EXPECT_EQ(r[1], 0.0);
  EXPECT_THROW(Standardizer::fit(Rows{}), InputError);
}

TEST(Sigmoid, KnownValues) {
  EXPECT_NEAR(sigmoid(std::log(3.0)), 0.75, 1e-15);
  EXPECT_DOUBLE_EQ(sigmoid(0), 0.5);
  EXPECT_NEAR(sigmoid(-800), 0.0, 1e-300);
  EXPECT_EQ(sigmoid(800), 1.0);
  for (double z : {-30.0, -2.5, 0.1, 4.0, 25.0}) EXPECT_NEAR(sigmoid(z) + sigmoid(-z), 1.0, 1e-15);
}

TEST(LogReg, ZeroModelPredictsUnclear) {
  LogRegModel m;
  m.weights = {0, 0};
  const std::vector<double> x = {3, -1};
  EXPECT_DOUBLE_EQ(m.predict_proba(x), 0.5);
  EXPECT_EQ(m.predict(x), Label::unclear);
}

TEST(LogReg, GradientMatchesFiniteDifferences) {
  const auto p = random_problem(1, 50, 4);
  const auto x = SparseMatrix::from_dense(p.x);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> w(4);
  for (auto& v : w) v = g(rng);
  const double b = 0.3;
  const double C = 2.0;
  const auto grad = lr_gradient(x, p.y, C, w, b);
  const double h = 1e-6;
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    const double fd = (lr_objective(x, p.y, C, wp, b) - lr_objective(x, p.y, C, wm, b)) / (2 * h);
    EXPECT_NEAR(grad.w[j], fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
  const double fd_b = (lr_objective(x, p.y, C, w, b + h) - lr_objective(x, p.y, C, w, b - h)) / (2 * h);
  EXPECT_NEAR(grad.b, fd_b, 1e-6 * std::max(1.0, std::abs(fd_b)));
}

TEST(LogReg, ObjectiveNeverIncreases) {
  const auto p = random_problem(3, 80, 5);
  LrTrace trace;
  lr_train(SparseMatrix::from_dense(p.x), p.y, {}, &trace);
  ASSERT_GE(trace.objective.size(), 2u);
  for (std::size_t i = 1; i < trace.objective.size(); ++i) {
    EXPECT_LE(trace.objective[i], trace.objective[i - 1]);
  }
  EXPECT_TRUE(trace.converged);
}

// Independent optimum: Newton's method on (w1, w2, b), written out here.
std::array<double, 3> newton_optimum(const Problem& p, double C) {
  std::array<double, 3> t{0, 0, 0};
  for (int it = 0; it < 100; ++it) {
    double g[3] = {t[0], t[1], 0};
    double H[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}};
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      const double f[3] = {p.x[i][0], p.x[i][1], 1};
      const double y = p.y[i] ? 1.0 : -1.0;
      const double m = y * (t[0] * f[0] + t[1] * f[1] + t[2]);
      const double s = 1 / (1 + std::exp(m));  // sigma(-m)
      for (int a = 0; a < 3; ++a) {
        g[a] += -C * y * s * f[a];
        for (int c = 0; c < 3; ++c) H[a][c] += C * s * (1 - s) * f[a] * f[c];
      }
    }
    // Solve H d = g by Cramer's rule.
    auto det3 = [](double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double D = det3(H);
    for (int col = 0; col < 3; ++col) {
      double M[3][3];
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) M[r][c] = c == col ? g[r] : H[r][c];
      }
      t[col] -= det3(M) / D;
    }
  }
  return t;
}

TEST(LogReg, MatchesNewtonOptimum) {
  for (std::uint64_t seed : {4, 5, 6}) {
    const auto p = random_problem(seed, 60, 2);
    const auto want = newton_optimum(p, 1.0);
    LrOptions opts;
    opts.gradient_tolerance = 1e-9;
    opts.max_iterations = 100000;
    const auto m = lr_train(SparseMatrix::from_dense(p.x), p.y, opts);
    EXPECT_NEAR(m.weights[0], want[0], 1e-4);
    EXPECT_NEAR(m.weights[1], want[1], 1e-4);
    EXPECT_NEAR(m.bias, want[2], 1e-4);
  }
}

TEST(LogReg, TwoPointExampleSeparatesInTheRightDirection) {
  const Rows x = {{1.0}, {-1.0}};
  const std::vector<int> y = {1, 0};
  const auto m = lr_train(SparseMatrix::from_dense(x), y);
  EXPECT_GT(m.weights[0], 0);
  EXPECT_NEAR(m.bias, 0, 1e-6);
  EXPECT_EQ(m.predict(std::vector<double>{1.0}), Label::unclear);
  EXPECT_EQ(m.predict(std::vector<double>{-1.0}), Label::clear);
}

TEST(LogReg, SingleClassThrows) {
  const Rows x = {{1.0}, {2.0}};
  EXPECT_THROW(lr_train(SparseMatrix::from_dense(x), std::vector<int>{1, 1}), InputError);
}

TEST(LogReg, StandardizedPredictionsIgnoreFeatureScale) {
  const auto p = random_problem(8, 70, 3);
  Rows scaled = p.x;
  for (auto& r : scaled) {
    r[0] *= 1000;
    r[2] = r[2] * 0.01 + 5;
  }
  const auto sa = Standardizer::fit(p.x);
  const auto sb = Standardizer::fit(scaled);
  LrOptions opts;
  opts.gradient_tolerance = 1e-9;
  opts.max_iterations = 100000;
  const auto ma = lr_train(SparseMatrix::from_dense(sa.apply(p.x)), p.y, opts);
  const auto mb = lr_train(SparseMatrix::from_dense(sb.apply(scaled)), p.y, opts);
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    EXPECT_NEAR(ma.predict_proba(sa.apply(p.x[i])), mb.predict_proba(sb.apply(scaled[i])), 1e-6);
  }
}

TEST(LogReg, SparseAndDenseAgree) {
  LogRegModel m;
  m.weights = {0.5, -1, 2};
  m.bias = 0.25;
  SparseVector v;
  v.index = {0, 2};
  v.value = {2, 1};
  EXPECT_DOUBLE_EQ(m.decision(v), m.decision(std::vector<double>{2, 0, 1}));
  EXPECT_THROW(m.decision(std::vector<double>{1}), InputError);
}

TEST(Threshold, SeparableDevSet) {
  const std::vector<double> v = {5, 6, 1, 2};
  const std::vector<int> y = {0, 0, 1, 1};
  const auto fit = threshold_fit(v, y, "CQGlobal");
  EXPECT_DOUBLE_EQ(fit.model.gamma, 3.5);
  EXPECT_DOUBLE_EQ(fit.dev_accuracy, 1.0);
  EXPECT_EQ(fit.model.feature, "CQGlobal");
  EXPECT_EQ(fit.model.predict(3.5), Label::clear);
  EXPECT_EQ(fit.model.predict(3.4), Label::unclear);
}

TEST(Threshold, AllUnclearPicksPlusInfinity) {
  const std::vector<double> v = {0.1, 0.5, 0.3};
  const std::vector<int> y = {1, 1, 1};
  const auto fit = threshold_fit(v, y, "f");
  EXPECT_TRUE(std::isinf(fit.model.gamma) && fit.model.gamma > 0);
  EXPECT_DOUBLE_EQ(fit.dev_accuracy, 1.0);
}

TEST(Threshold, ConstantFeature) {
  const std::vector<double> v = {0, 0, 0, 0};
  const std::vector<int> y = {1, 0, 0, 0};
  const auto fit = threshold_fit(v, y, "f");
  EXPECT_TRUE(std::isinf(fit.model.gamma) && fit.model.gamma < 0);
  EXPECT_DOUBLE_EQ(fit.dev_accuracy, 0.75);
}

TEST(Threshold, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 15;
    std::vector<double> v(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<double>(rng() % 6);
      y[i] = static_cast<int>(rng() % 2);
    }
    std::vector<double> candidates = {-INFINITY, INFINITY};
    for (double a : v) {
      candidates.push_back(a);
      candidates.push_back(a + 0.5);
    }
    std::size_t best = 0;
    for (double g : candidates) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < n; ++i) correct += (v[i] >= g ? 0 : 1) == y[i];
      best = std::max(best, correct);
    }
    const auto fit = threshold_fit(v, y, "f");
    EXPECT_DOUBLE_EQ(fit.dev_accuracy, static_cast<double>(best) / static_cast<double>(n));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += to_int(fit.model.predict(v[i])) == y[i];
    EXPECT_EQ(correct, best);
  }
}

TEST(SimqMajority, VotesOverTopTen) {
  using retrieval::ScoredHit;
  std::vector<ScoredHit> hits;
  for (int i = 0; i < 4; ++i) hits.push_back({i, 10.0 - i, Label::clear});
  for (int i = 4; i < 10; ++i) hits.push_back({i, 10.0 - i, Label::unclear});
  EXPECT_EQ(simq_majority(hits), Label::unclear);
  EXPECT_DOUBLE_EQ(simq_unclear_share(hits), 0.6);
  // Hits beyond ten do not vote.
  for (int i = 10; i < 30; ++i) hits.push_back({i, 0.1, Label::clear});
  EXPECT_EQ(simq_majority(hits), Label::unclear);
  hits.resize(2);
  EXPECT_EQ(simq_majority(hits), Label::clear);
  hits[1].label = Label::unclear;
  EXPECT_EQ(simq_majority(hits, Label::clear), Label::clear);
  EXPECT_EQ(simq_majority(hits, Label::unclear), Label::unclear);
  EXPECT_EQ(simq_majority({}, Label::clear), Label::clear);
  EXPECT_DOUBLE_EQ(simq_unclear_share({}), 0.5);
}

TEST(Majority, TrainingLabelShare) {
  EXPECT_EQ(majority_label(std::vector<int>{1, 1, 0}), Label::unclear);
  EXPECT_EQ(majority_label(std::vector<int>{0, 0, 1}), Label::clear);
}

TEST(RandomBaseline, FairAndReproducible) {
  RandomBaseline a(123), b(123);
  double sum = 0;
  std::size_t unclear = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto da = a.next();
    const auto db = b.next();
    ASSERT_EQ(da.score, db.score);
    ASSERT_EQ(da.label, db.label);
    ASSERT_GE(da.score, 0);
    ASSERT_LT(da.score, 1);
    sum += da.score;
    unclear += da.label == Label::unclear;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
  EXPECT_NEAR(static_cast<double>(unclear) / n, 0.5, 0.01);
  RandomBaseline c(124);
  EXPECT_NE(RandomBaseline(123).next().score, c.next().score);
}

}  // namespace
}  // namespace clarity::models
