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

#ifndef MULTIUPLIFT_CALIBRATE_H_
#define MULTIUPLIFT_CALIBRATE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "multiuplift/baselearn.h"
#include "multiuplift/common.h"

namespace multiuplift {

// Pool-adjacent-violators: the non-decreasing sequence minimising
// sum_i w_i (out_i - values_i)^2. Pooled blocks take their weighted mean.
std::vector<double> Pava(std::span<const double> values, std::span<const double> weights);

// Piecewise-linear non-decreasing map. knots_x strictly increasing,
// knots_y non-decreasing, same length >= 1.
struct IsotonicModel {
  std::vector<double> knots_x;
  std::vector<double> knots_y;
};

// Sorts by score, merges tied scores into one knot weighted by its count,
// and runs Pava on the targets.
IsotonicModel FitIsotonic(std::span<const double> scores, std::span<const double> targets);

// Linear interpolation between knots, clamped to the end knots outside.
double ApplyIsotonic(const IsotonicModel& model, double score);
std::vector<double> ApplyIsotonic(const IsotonicModel& model, std::span<const double> scores);

struct CalibratedFold {
  LinearModel base;
  IsotonicModel calibrator;
};

// Cross-fitted isotonic calibration of a logistic outcome model: fold f's
// base model is trained on the other folds and its calibrator on fold f.
// Predictions average the calibrated fold outputs.
struct CalibratedLearner {
  std::vector<CalibratedFold> folds;

  int k() const { return static_cast<int>(folds.size()); }
  Eigen::Index dimension() const { return folds.front().base.dimension(); }
};

// Fold index of each row: a permutation drawn from
// StreamSeed(seed, "folds"), row perm[i] goes to fold i mod k.
std::vector<int> FoldAssignment(std::size_t n, int k, std::uint64_t seed);

CalibratedLearner CalibratedFit(const Matrix& x, std::span<const double> y,
                                const FitConfig& cfg, int k, std::uint64_t seed);

std::vector<double> PredictProba(const CalibratedLearner& learner, const Matrix& x);

// Equal-width bins over [0, 1]; sum over non-empty bins of
// (bin size / n) * |mean predicted - mean actual|.
double ExpectedCalibrationError(std::span<const double> predicted,
                                std::span<const double> actual, int n_bins = 10);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_CALIBRATE_H_
