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

#include "multiuplift/baselearn.h"

#include <algorithm>
#include <cmath>

#include "multiuplift/kernels.h"

namespace multiuplift {
namespace {

constexpr double kStdFloor = 1e-12;
constexpr double kLossSlack = 1e-13;

void CheckFinite(const Matrix& x) {
  if (!x.allFinite()) throw ValidationError("feature matrix contains non-finite values");
}

}  // namespace

void FitConfig::Validate() const {
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ValidationError("l2 must be >= 0");
  if (max_iter < 1) throw ValidationError("max_iter must be positive");
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
}

LinearModel FitLogistic(const Matrix& x, std::span<const double> y, const FitConfig& cfg,
                        FitTrace* trace) {
  cfg.Validate();
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 1) throw ValidationError("logistic fit needs at least one row");
  if (static_cast<std::size_t>(n) != y.size()) {
    throw ValidationError("row count does not match target length");
  }
  CheckFinite(x);
  double y_mean = 0.0;
  for (const double v : y) {
    if (v != 0.0 && v != 1.0) throw ValidationError("logistic targets must be 0 or 1");
    y_mean += v;
  }
  y_mean /= static_cast<double>(n);

  // Loss curvature along every standardized column and the intercept at the
  // starting point, where all predictions equal the base rate.
  const double clipped = std::clamp(y_mean, 1e-6, 1.0 - 1e-6);
  const double curvature = clipped * (1.0 - clipped);

  const Vector mean = x.colwise().mean().transpose();
  Vector scale(d);
  Vector penalty(d);
  Vector precondition(d);
  Matrix xs(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double sd = std::sqrt((x.col(j).array() - mean(j)).square().mean());
    if (sd < kStdFloor) {
      scale(j) = 0.0;
      penalty(j) = 0.0;
      xs.col(j).setZero();
    } else {
      scale(j) = sd;
      // The penalty is on raw-scale weights: w_raw = w_std / sd.
      penalty(j) = cfg.l2 / (sd * sd);
      xs.col(j) = (x.col(j).array() - mean(j)) / sd;
    }
    precondition(j) = 1.0 / (curvature + penalty(j));
  }

  Vector w = Vector::Zero(d);
  double b = std::log(clipped / (1.0 - clipped));
  auto objective = kernels::parallel::LogisticLossGradient(xs, y, w, b, penalty);
  double step = cfg.learning_rate;

  FitTrace local;
  local.loss.push_back(objective.loss);
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const double grad_norm = std::max(objective.grad_weights.cwiseAbs().maxCoeff(),
                                      std::abs(objective.grad_intercept));
    if (grad_norm < cfg.tol) {
      local.converged = true;
      break;
    }
    const Vector w_next = w - step * precondition.cwiseProduct(objective.grad_weights);
    const double b_next = b - step * objective.grad_intercept / curvature;
    auto next = kernels::parallel::LogisticLossGradient(xs, y, w_next, b_next, penalty);
    // Near the optimum the loss change drops below its rounding error, so a
    // step is accepted when the loss rises by no more than that error.
    if (next.loss <= objective.loss + kLossSlack * std::abs(objective.loss)) {
      w = w_next;
      b = b_next;
      objective = std::move(next);
      local.loss.push_back(objective.loss);
    } else {
      step *= 0.5;
      if (step < 1e-30) break;
    }
  }
  local.iterations = iter;
  if (trace != nullptr) *trace = std::move(local);

  LinearModel model;
  model.kind = LinearKind::kLogistic;
  model.weights = Vector::Zero(d);
  model.intercept = b;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (scale(j) == 0.0) continue;
    model.weights(j) = w(j) / scale(j);
    model.intercept -= model.weights(j) * mean(j);
  }
  if (!model.weights.allFinite() || !std::isfinite(model.intercept)) {
    throw FitError("logistic fit produced non-finite coefficients");
  }
  return model;
}

LinearModel FitRidge(const Matrix& x, std::span<const double> y, double l2) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 1) throw ValidationError("ridge fit needs at least one row");
  if (static_cast<std::size_t>(n) != y.size()) {
    throw ValidationError("row count does not match target length");
  }
  if (!(l2 >= 0.0)) throw ValidationError("l2 must be >= 0");
  CheckFinite(x);

  const Vector x_mean = x.colwise().mean().transpose();
  double y_mean = 0.0;
  for (const double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  const Matrix centered = x.rowwise() - x_mean.transpose();
  std::vector<double> y_centered(y.begin(), y.end());
  for (double& v : y_centered) v -= y_mean;

  const auto cross = kernels::parallel::Cross(centered, y_centered);
  Matrix system = cross.xtx;
  system.diagonal().array() += l2;

  LinearModel model;
  model.kind = LinearKind::kRidge;
  if (d == 0) {
    model.weights = Vector::Zero(0);
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(system);
    if (qr.rank() < d) {
      throw FitError("ridge normal equations are singular (l2 = " + std::to_string(l2) +
                     ", rank " + std::to_string(qr.rank()) + " < " + std::to_string(d) +
                     ")");
    }
    model.weights = qr.solve(cross.xty);
  }
  model.intercept = y_mean - x_mean.dot(model.weights);
  if (!model.weights.allFinite() || !std::isfinite(model.intercept)) {
    throw FitError("ridge fit produced non-finite coefficients");
  }
  return model;
}

std::vector<double> PredictProba(const LinearModel& model, const Matrix& x) {
  if (model.kind != LinearKind::kLogistic) {
    throw ValidationError("PredictProba needs a logistic model");
  }
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  kernels::parallel::LinearPredictor(x, model.weights, model.intercept, out);
  for (double& v : out) v = kernels::Sigmoid(v);
  return out;
}

std::vector<double> Predict(const LinearModel& model, const Matrix& x) {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  kernels::parallel::LinearPredictor(x, model.weights, model.intercept, out);
  return out;
}

LinearModel FitPropensity(const CampaignDataset& dataset, const FitConfig& cfg) {
  std::vector<double> t(dataset.size());
  bool has_treated = false, has_control = false;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int label = dataset.treatments()[i];
    if (label > 1) {
      throw ValidationError("propensity model needs binary treatment labels, found " +
                            std::to_string(label));
    }
    t[i] = label;
    (label == 1 ? has_treated : has_control) = true;
  }
  if (!has_treated || !has_control) {
    throw FitError("propensity model needs both treated and control rows");
  }
  return FitLogistic(dataset.features(), t, cfg);
}

}  // namespace multiuplift
