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

#include <vector>

namespace multiuplift::kernels {
namespace {

void CheckShapes(const Matrix& x, std::size_t y_size, const Vector& weights) {
  if (static_cast<std::size_t>(x.rows()) != y_size) {
    throw ValidationError("row count does not match target length");
  }
  if (x.cols() != weights.size()) {
    throw ValidationError("model has " + std::to_string(weights.size()) +
                          " weights but input has " + std::to_string(x.cols()) +
                          " columns");
  }
}

// Accumulates the unscaled log-loss and gradient sums of rows [begin, end).
void AccumulateLogistic(const Matrix& x, std::span<const double> y,
                        const Vector& weights, double intercept, Eigen::Index begin,
                        Eigen::Index end, double& loss, Vector& grad_w,
                        double& grad_b) {
  for (Eigen::Index i = begin; i < end; ++i) {
    const double z = intercept + x.row(i).dot(weights);
    const double yi = y[static_cast<std::size_t>(i)];
    loss += Softplus(z) - yi * z;
    const double residual = Sigmoid(z) - yi;
    grad_w.noalias() += residual * x.row(i).transpose();
    grad_b += residual;
  }
}

// Same sums as AccumulateLogistic, computed with one matrix-vector product
// per direction over the row block.
void AccumulateLogisticBlock(const Matrix& x, std::span<const double> y,
                             const Vector& weights, double intercept, Eigen::Index begin,
                             Eigen::Index end, double& loss, Vector& grad_w,
                             double& grad_b) {
  const auto rows = x.middleRows(begin, end - begin);
  Vector z = rows * weights;
  Vector residual(z.size());
  for (Eigen::Index r = 0; r < z.size(); ++r) {
    const double zi = z(r) + intercept;
    const double yi = y[static_cast<std::size_t>(begin + r)];
    loss += Softplus(zi) - yi * zi;
    residual(r) = Sigmoid(zi) - yi;
    grad_b += residual(r);
  }
  grad_w.noalias() += rows.transpose() * residual;
}

LogisticObjective Finish(double loss, Vector grad_w, double grad_b, Eigen::Index n,
                         const Vector& weights, const Vector& penalty) {
  const double inv_n = 1.0 / static_cast<double>(n);
  LogisticObjective out;
  out.loss = loss * inv_n + 0.5 * (penalty.array() * weights.array().square()).sum();
  out.grad_weights = grad_w * inv_n + (penalty.array() * weights.array()).matrix();
  out.grad_intercept = grad_b * inv_n;
  return out;
}

}  // namespace

namespace serial {

LogisticObjective LogisticLossGradient(const Matrix& x, std::span<const double> y,
                                       const Vector& weights, double intercept,
                                       const Vector& penalty) {
  CheckShapes(x, y.size(), weights);
  double loss = 0.0, grad_b = 0.0;
  Vector grad_w = Vector::Zero(weights.size());
  AccumulateLogistic(x, y, weights, intercept, 0, x.rows(), loss, grad_w, grad_b);
  return Finish(loss, std::move(grad_w), grad_b, x.rows(), weights, penalty);
}

void LinearPredictor(const Matrix& x, const Vector& weights, double intercept,
                     std::span<double> out) {
  CheckShapes(x, out.size(), weights);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = intercept + x.row(i).dot(weights);
  }
}

CrossProducts Cross(const Matrix& x, std::span<const double> y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw ValidationError("row count does not match target length");
  }
  const Eigen::Index d = x.cols();
  CrossProducts out{Matrix::Zero(d, d), Vector::Zero(d), Vector::Zero(d), 0.0};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    out.xtx.noalias() += x.row(i).transpose() * x.row(i);
    out.xty.noalias() += yi * x.row(i).transpose();
    out.x_sum.noalias() += x.row(i).transpose();
    out.y_sum += yi;
  }
  return out;
}

}  // namespace serial

namespace parallel {

LogisticObjective LogisticLossGradient(const Matrix& x, std::span<const double> y,
                                       const Vector& weights, double intercept,
                                       const Vector& penalty) {
  CheckShapes(x, y.size(), weights);
  const Eigen::Index n = x.rows();
  const Eigen::Index blocks = (n + kBlockRows - 1) / kBlockRows;
  std::vector<double> block_loss(static_cast<std::size_t>(blocks), 0.0);
  std::vector<double> block_gb(static_cast<std::size_t>(blocks), 0.0);
  std::vector<Vector> block_gw(static_cast<std::size_t>(blocks),
                               Vector::Zero(weights.size()));

#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const auto k = static_cast<std::size_t>(b);
    AccumulateLogisticBlock(x, y, weights, intercept, b * kBlockRows,
                            std::min(n, (b + 1) * kBlockRows), block_loss[k], block_gw[k],
                            block_gb[k]);
  }

  double loss = 0.0, grad_b = 0.0;
  Vector grad_w = Vector::Zero(weights.size());
  for (std::size_t k = 0; k < block_loss.size(); ++k) {
    loss += block_loss[k];
    grad_b += block_gb[k];
    grad_w += block_gw[k];
  }
  return Finish(loss, std::move(grad_w), grad_b, n, weights, penalty);
}

void LinearPredictor(const Matrix& x, const Vector& weights, double intercept,
                     std::span<double> out) {
  CheckShapes(x, out.size(), weights);
  const Eigen::Index n = x.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = intercept + x.row(i).dot(weights);
  }
}

serial::CrossProducts Cross(const Matrix& x, std::span<const double> y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw ValidationError("row count does not match target length");
  }
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::Index blocks = (n + kBlockRows - 1) / kBlockRows;
  std::vector<serial::CrossProducts> partial(
      static_cast<std::size_t>(blocks),
      serial::CrossProducts{Matrix::Zero(d, d), Vector::Zero(d), Vector::Zero(d), 0.0});

#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    auto& acc = partial[static_cast<std::size_t>(b)];
    const Eigen::Index end = std::min(n, (b + 1) * kBlockRows);
    for (Eigen::Index i = b * kBlockRows; i < end; ++i) {
      const double yi = y[static_cast<std::size_t>(i)];
      acc.xtx.noalias() += x.row(i).transpose() * x.row(i);
      acc.xty.noalias() += yi * x.row(i).transpose();
      acc.x_sum.noalias() += x.row(i).transpose();
      acc.y_sum += yi;
    }
  }

  serial::CrossProducts out{Matrix::Zero(d, d), Vector::Zero(d), Vector::Zero(d), 0.0};
  for (const auto& acc : partial) {
    out.xtx += acc.xtx;
    out.xty += acc.xty;
    out.x_sum += acc.x_sum;
    out.y_sum += acc.y_sum;
  }
  return out;
}

}  // namespace parallel

}  // namespace multiuplift::kernels
