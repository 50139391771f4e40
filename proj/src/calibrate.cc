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

#include "multiuplift/calibrate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multiuplift/random.h"

namespace multiuplift {

std::vector<double> Pava(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw ValidationError("pava needs at least one value");
  if (values.size() != weights.size()) {
    throw ValidationError("pava values and weights differ in length");
  }
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw ValidationError("pava weights must be positive, got " +
                            std::to_string(weights[i]) + " at index " + std::to_string(i));
    }
    if (!std::isfinite(values[i])) throw ValidationError("pava values must be finite");
    blocks.push_back({values[i], weights[i], 1});
    // Merge backwards while the last two blocks violate monotonicity.
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block last = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + last.weight;
      prev.mean = (prev.weight * prev.mean + last.weight * last.mean) / w;
      prev.weight = w;
      prev.count += last.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& block : blocks) out.insert(out.end(), block.count, block.mean);
  return out;
}

IsotonicModel FitIsotonic(std::span<const double> scores, std::span<const double> targets) {
  if (scores.size() != targets.size()) {
    throw ValidationError("isotonic scores and targets differ in length");
  }
  if (scores.size() < 2) throw ValidationError("isotonic fit needs at least 2 points");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw ValidationError("isotonic scores must be finite");
    if (!(targets[i] >= 0.0 && targets[i] <= 1.0)) {
      throw ValidationError("isotonic targets must lie in [0, 1]");
    }
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::vector<double> xs, sums, weights;
  for (const std::size_t i : order) {
    if (!xs.empty() && xs.back() == scores[i]) {
      sums.back() += targets[i];
      weights.back() += 1.0;
    } else {
      xs.push_back(scores[i]);
      sums.push_back(targets[i]);
      weights.push_back(1.0);
    }
  }
  std::vector<double> means(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) means[j] = sums[j] / weights[j];
  return IsotonicModel{std::move(xs), Pava(means, weights)};
}

double ApplyIsotonic(const IsotonicModel& model, double score) {
  const auto& kx = model.knots_x;
  const auto& ky = model.knots_y;
  if (score <= kx.front()) return ky.front();
  if (score >= kx.back()) return ky.back();
  const auto upper = std::upper_bound(kx.begin(), kx.end(), score);
  const std::size_t hi = static_cast<std::size_t>(upper - kx.begin());
  const std::size_t lo = hi - 1;
  const double t = (score - kx[lo]) / (kx[hi] - kx[lo]);
  return ky[lo] + t * (ky[hi] - ky[lo]);
}

std::vector<double> ApplyIsotonic(const IsotonicModel& model,
                                  std::span<const double> scores) {
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = ApplyIsotonic(model, scores[i]);
  return out;
}

std::vector<int> FoldAssignment(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("calibration needs k >= 2 folds");
  Rng rng(StreamSeed(seed, "folds"));
  const auto perm = Permutation(n, rng);
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[perm[i]] = static_cast<int>(i % k);
  return fold;
}

CalibratedLearner CalibratedFit(const Matrix& x, std::span<const double> y,
                                const FitConfig& cfg, int k, std::uint64_t seed) {
  const std::size_t n = y.size();
  if (static_cast<std::size_t>(x.rows()) != n) {
    throw ValidationError("row count does not match target length");
  }
  const std::vector<int> fold = FoldAssignment(n, k, seed);
  CalibratedLearner learner;
  learner.folds.reserve(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    std::vector<Eigen::Index> train_rows, held_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (fold[i] == f ? held_rows : train_rows).push_back(static_cast<Eigen::Index>(i));
    }
    std::vector<double> y_train, y_held;
    for (const auto i : train_rows) y_train.push_back(y[static_cast<std::size_t>(i)]);
    for (const auto i : held_rows) y_held.push_back(y[static_cast<std::size_t>(i)]);
    const bool has_pos = std::find(y_train.begin(), y_train.end(), 1.0) != y_train.end();
    const bool has_neg = std::find(y_train.begin(), y_train.end(), 0.0) != y_train.end();
    if (!has_pos || !has_neg) {
      throw FitError("calibration fold " + std::to_string(f) +
                     ": training part contains a single outcome class");
    }
    if (held_rows.size() < 2) {
      throw FitError("calibration fold " + std::to_string(f) +
                     ": fewer than 2 held-out rows");
    }
    const Matrix x_train = x(train_rows, Eigen::all);
    const Matrix x_held = x(held_rows, Eigen::all);
    LinearModel base = FitLogistic(x_train, y_train, cfg);
    IsotonicModel calibrator = FitIsotonic(PredictProba(base, x_held), y_held);
    learner.folds.push_back({std::move(base), std::move(calibrator)});
  }
  return learner;
}

std::vector<double> PredictProba(const CalibratedLearner& learner, const Matrix& x) {
  if (learner.folds.empty()) throw ValidationError("calibrated learner has no folds");
  std::vector<double> out(static_cast<std::size_t>(x.rows()), 0.0);
  for (const auto& fold : learner.folds) {
    const auto raw = PredictProba(fold.base, x);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += ApplyIsotonic(fold.calibrator, raw[i]);
    }
  }
  const double inv_k = 1.0 / static_cast<double>(learner.folds.size());
  for (double& v : out) v *= inv_k;
  return out;
}

double ExpectedCalibrationError(std::span<const double> predicted,
                                std::span<const double> actual, int n_bins) {
  if (predicted.size() != actual.size()) {
    throw ValidationError("predicted and actual differ in length");
  }
  if (n_bins < 1) throw ValidationError("n_bins must be >= 1");
  if (predicted.empty()) return 0.0;
  std::vector<double> sum_pred(static_cast<std::size_t>(n_bins), 0.0);
  std::vector<double> sum_actual(static_cast<std::size_t>(n_bins), 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(n_bins), 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double p = predicted[i];
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("predictions must lie in [0, 1]");
    auto bin = static_cast<std::size_t>(p * n_bins);
    bin = std::min(bin, static_cast<std::size_t>(n_bins - 1));
    sum_pred[bin] += p;
    sum_actual[bin] += actual[i];
    ++count[bin];
  }
  double ece = 0.0;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0) continue;
    const double c = static_cast<double>(count[b]);
    ece += (c / static_cast<double>(predicted.size())) *
           std::abs(sum_pred[b] / c - sum_actual[b] / c);
  }
  return ece;
}

}  // namespace multiuplift
