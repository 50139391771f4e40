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

#ifndef MULTIUPLIFT_BASELEARN_H_
#define MULTIUPLIFT_BASELEARN_H_

#include <span>
#include <vector>

#include "multiuplift/common.h"
#include "multiuplift/dataset.h"

namespace multiuplift {

enum class LinearKind { kLogistic, kRidge };

// Affine model on raw (unstandardized) features. Logistic models pass the
// affine score through Sigmoid().
struct LinearModel {
  LinearKind kind = LinearKind::kLogistic;
  Vector weights;
  double intercept = 0.0;

  Eigen::Index dimension() const { return weights.size(); }
};

struct FitConfig {
  double l2 = 1e-3;
  int max_iter = 5000;
  double tol = 1e-8;
  // Initial gradient-descent step; halved whenever a step would increase
  // the objective.
  double learning_rate = 0.1;

  void Validate() const;
};

// Optional diagnostics from FitLogistic.
struct FitTrace {
  // Objective after initialisation and after every accepted step.
  std::vector<double> loss;
  int iterations = 0;
  bool converged = false;
};

// Minimises mean log-loss + (l2 / 2) * |weights|^2 (intercept unpenalised)
// by full-batch gradient descent with step halving. Features are
// standardised internally and the coefficients mapped back to the raw
// scale; columns with standard deviation below 1e-12 get weight 0.
// Stops when the gradient infinity-norm drops below tol or after max_iter
// iterations.
LinearModel FitLogistic(const Matrix& x, std::span<const double> y, const FitConfig& cfg,
                        FitTrace* trace = nullptr);

// Exact solution of min sum_i (y_i - a - w.x_i)^2 + l2 |w|^2 with the
// intercept a unpenalised. Throws FitError if the system is singular
// (only possible with l2 == 0 and rank-deficient x).
LinearModel FitRidge(const Matrix& x, std::span<const double> y, double l2);

std::vector<double> PredictProba(const LinearModel& model, const Matrix& x);
std::vector<double> Predict(const LinearModel& model, const Matrix& x);

// P(T = 1 | x) on a dataset whose labels are {0, 1}.
LinearModel FitPropensity(const CampaignDataset& dataset, const FitConfig& cfg);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_BASELEARN_H_
