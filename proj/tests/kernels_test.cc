/*
 * Copyright 2026 The multiuplift Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "multiuplift/kernels.h"

#include <omp.h>

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "multiuplift/random.h"

namespace multiuplift::kernels {
namespace {

struct Problem {
  Matrix x;
  std::vector<double> y;
  Vector w;
  double b = 0.0;
  Vector penalty;
};

Problem RandomProblem(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Problem p;
  p.x.resize(n, d);
  p.y.resize(static_cast<std::size_t>(n));
  p.w.resize(d);
  p.penalty.resize(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) p.x(i, j) = rng.Normal();
    p.y[static_cast<std::size_t>(i)] = rng.Bernoulli(0.4) ? 1.0 : 0.0;
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    p.w(j) = rng.Normal();
    p.penalty(j) = rng.Uniform01() * 0.1;
  }
  p.b = rng.Normal();
  return p;
}

double MaxRelDiff(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

TEST(SigmoidTest, StaysInsideOpenInterval) {
  for (const double z : {-1000.0, -50.0, -1.0, 0.0, 1.0, 40.0, 50.0, 1000.0}) {
    const double p = Sigmoid(z);
    EXPECT_GT(p, 0.0) << z;
    EXPECT_LT(p, 1.0) << z;
  }
  EXPECT_EQ(Sigmoid(0.0), 0.5);
  EXPECT_NEAR(Sigmoid(2.0) + Sigmoid(-2.0), 1.0, 1e-15);
}

TEST(SoftplusTest, MatchesNaiveFormulaWhereSafe) {
  for (double z = -30.0; z <= 30.0; z += 0.37) {
    EXPECT_NEAR(Softplus(z), std::log(1.0 + std::exp(z)), 1e-12 * (1.0 + std::abs(z)));
  }
  EXPECT_DOUBLE_EQ(Softplus(800.0), 800.0);
  EXPECT_GT(Softplus(-800.0), -1e-300);
}

TEST(LogisticLossGradientTest, SingleRowExample) {
  Matrix x(1, 1);
  x << 1.0;
  const std::vector<double> y = {1.0};
  const auto obj = serial::LogisticLossGradient(x, y, Vector::Zero(1), 0.0, Vector::Zero(1));
  EXPECT_DOUBLE_EQ(obj.grad_weights(0), -0.5);
  EXPECT_DOUBLE_EQ(obj.grad_intercept, -0.5);
  EXPECT_DOUBLE_EQ(obj.loss, std::log(2.0));
}

TEST(LogisticLossGradientTest, MatchesCentralDifferences) {
  Rng rng(101);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng.UniformIndex(50));
    const auto d = static_cast<Eigen::Index>(1 + rng.UniformIndex(5));
    const Problem p = RandomProblem(rng, n, d);
    const auto obj = serial::LogisticLossGradient(p.x, p.y, p.w, p.b, p.penalty);
    Vector numeric(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) {
      Vector wp = p.w, wm = p.w;
      double bp = p.b, bm = p.b;
      if (j < d) {
        wp(j) += h;
        wm(j) -= h;
      } else {
        bp += h;
        bm -= h;
      }
      numeric(j) = (serial::LogisticLossGradient(p.x, p.y, wp, bp, p.penalty).loss -
                    serial::LogisticLossGradient(p.x, p.y, wm, bm, p.penalty).loss) /
                   (2.0 * h);
    }
    Vector analytic(d + 1);
    analytic << obj.grad_weights, obj.grad_intercept;
    const double rel = (analytic - numeric).norm() / std::max(analytic.norm(), 1e-12);
    EXPECT_LT(rel, 1e-6) << "trial " << trial;
  }
}

TEST(ParallelKernelsTest, AgreeWithSerialReference) {
  Rng rng(202);
  for (const Eigen::Index n : {1, 7, 1023, 1024, 1025, 5000}) {
    const Problem p = RandomProblem(rng, n, 4);
    const auto s = serial::LogisticLossGradient(p.x, p.y, p.w, p.b, p.penalty);
    const auto q = parallel::LogisticLossGradient(p.x, p.y, p.w, p.b, p.penalty);
    EXPECT_NEAR(q.loss, s.loss, 1e-12 * std::abs(s.loss)) << n;
    EXPECT_LT(MaxRelDiff(q.grad_weights, s.grad_weights), 1e-12) << n;
    EXPECT_NEAR(q.grad_intercept, s.grad_intercept, 1e-12) << n;

    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    serial::LinearPredictor(p.x, p.w, p.b, a);
    parallel::LinearPredictor(p.x, p.w, p.b, b);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-12);

    const auto cs = serial::Cross(p.x, p.y);
    const auto cp = parallel::Cross(p.x, p.y);
    EXPECT_LT((cs.xtx - cp.xtx).cwiseAbs().maxCoeff(),
              1e-12 * std::max(1.0, cs.xtx.cwiseAbs().maxCoeff()));
    EXPECT_LT(MaxRelDiff(cp.xty, cs.xty), 1e-12);
    EXPECT_LT(MaxRelDiff(cp.x_sum, cs.x_sum), 1e-12);
    EXPECT_NEAR(cp.y_sum, cs.y_sum, 1e-9);
  }
}

TEST(ParallelKernelsTest, ResultsIndependentOfThreadCount) {
  Rng rng(303);
  const Problem p = RandomProblem(rng, 10000, 5);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto ref = parallel::LogisticLossGradient(p.x, p.y, p.w, p.b, p.penalty);
  const auto ref_cross = parallel::Cross(p.x, p.y);
  for (const int threads : {2, 3, 4, 8}) {
    omp_set_num_threads(threads);
    const auto got = parallel::LogisticLossGradient(p.x, p.y, p.w, p.b, p.penalty);
    const auto cross = parallel::Cross(p.x, p.y);
    EXPECT_EQ(got.loss, ref.loss) << threads;
    EXPECT_TRUE(got.grad_weights == ref.grad_weights) << threads;
    EXPECT_EQ(got.grad_intercept, ref.grad_intercept) << threads;
    EXPECT_TRUE(cross.xtx == ref_cross.xtx) << threads;
    EXPECT_TRUE(cross.xty == ref_cross.xty) << threads;
  }
  omp_set_num_threads(saved);
}

TEST(KernelsTest, ShapeMismatchThrows) {
  Matrix x(3, 2);
  x.setOnes();
  const std::vector<double> y = {1.0, 0.0};
  EXPECT_THROW(serial::LogisticLossGradient(x, y, Vector::Zero(2), 0.0, Vector::Zero(2)),
               ValidationError);
  const std::vector<double> y3 = {1.0, 0.0, 1.0};
  EXPECT_THROW(parallel::LogisticLossGradient(x, y3, Vector::Zero(3), 0.0, Vector::Zero(3)),
               ValidationError);
  std::vector<double> out(3);
  EXPECT_THROW(parallel::LinearPredictor(x, Vector::Zero(1), 0.0, out), ValidationError);
}

}  // namespace
}  // namespace multiuplift::kernels
