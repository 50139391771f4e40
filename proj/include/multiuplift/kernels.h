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

#ifndef MULTIUPLIFT_KERNELS_H_
#define MULTIUPLIFT_KERNELS_H_

// Row-parallel numeric kernels used by the base learners.
//
// Each kernel has a plain serial reference in `kernels::serial` and an
// OpenMP version in `kernels::parallel`. The parallel reductions split
// the rows into fixed blocks of kBlockRows, reduce each block
// independently and then add the block partials in block order, so their
// result does not depend on the number of threads. Library code calls the
// parallel versions; the serial ones back the tests and the benchmark.

#include <cmath>
#include <limits>
#include <span>

#include "multiuplift/common.h"

namespace multiuplift::kernels {

inline constexpr Eigen::Index kBlockRows = 1024;

// Overflow-safe logistic function, clamped to the open interval (0, 1).
inline double Sigmoid(double z) {
  constexpr double kLow = std::numeric_limits<double>::min();
  // nextafter(1.0, 0.0)
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  double p;
  if (z >= 0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  return p < kLow ? kLow : (p > kHigh ? kHigh : p);
}

// log(1 + exp(z)) without overflow.
inline double Softplus(double z) {
  return (z > 0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z)));
}

struct LogisticObjective {
  // Mean log-loss plus 0.5 * sum_j penalty_j * w_j^2.
  double loss = 0.0;
  Vector grad_weights;
  double grad_intercept = 0.0;
};

namespace serial {

LogisticObjective LogisticLossGradient(const Matrix& x, std::span<const double> y,
                                       const Vector& weights, double intercept,
                                       const Vector& penalty);
// out_i = intercept + x_i . weights
void LinearPredictor(const Matrix& x, const Vector& weights, double intercept,
                     std::span<double> out);
// Sums of x^T x and x^T y over rows, plus column sums and sum of y.
struct CrossProducts {
  Matrix xtx;
  Vector xty;
  Vector x_sum;
  double y_sum = 0.0;
};
CrossProducts Cross(const Matrix& x, std::span<const double> y);

}  // namespace serial

namespace parallel {

LogisticObjective LogisticLossGradient(const Matrix& x, std::span<const double> y,
                                       const Vector& weights, double intercept,
                                       const Vector& penalty);
void LinearPredictor(const Matrix& x, const Vector& weights, double intercept,
                     std::span<double> out);
serial::CrossProducts Cross(const Matrix& x, std::span<const double> y);

}  // namespace parallel

}  // namespace multiuplift::kernels

#endif  // MULTIUPLIFT_KERNELS_H_
