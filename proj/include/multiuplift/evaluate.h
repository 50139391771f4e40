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

#ifndef MULTIUPLIFT_EVALUATE_H_
#define MULTIUPLIFT_EVALUATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "multiuplift/common.h"
#include "multiuplift/selection.h"

namespace multiuplift {

struct UpliftCurve {
  // Strictly ascending, last = 1.
  std::vector<double> fractions;
  std::vector<double> cumulative_uplift;
};

// Rows sorted by descending score (ties keep input order). Point b covers
// the top ceil(b * n / n_bins) rows and holds treated mean outcome minus
// control mean outcome over that prefix, or 0 when either arm is empty.
// `treatment` is 0 (control) or 1 (treated).
UpliftCurve ComputeUpliftCurve(std::span<const double> score,
                               std::span<const int> treatment,
                               std::span<const double> outcome, int n_bins = 100);

// Trapezoidal area under the curve with (0, 0) prepended; unnormalised.
double Auuc(const UpliftCurve& curve);

struct RandomBaseline {
  double mean = 0.0;
  // Linear interpolation between order statistics (h = 0.95 * (m - 1)).
  double p95 = 0.0;
  std::vector<double> samples;
};

// AUUC of uniformly random orderings; shuffle s draws a permutation from
// StreamSeed(seed, "auuc-random", s). Shuffles run in parallel.
RandomBaseline AuucRandomBaseline(std::span<const int> treatment,
                                  std::span<const double> outcome, int n_shuffles,
                                  std::uint64_t seed, int n_bins = 100);

struct QuantileLift {
  double quantile = 1.0;
  // Treated conversion among the top ceil(q * n) scored rows (0 if none).
  double treated_rate = 0.0;
  // Control conversion over the full population.
  double baseline_rate = 0.0;
  // Undefined when baseline_rate is 0.
  std::optional<double> lift_ratio;
};

QuantileLift LiftAtQuantile(std::span<const double> score, std::span<const int> treatment,
                            std::span<const double> outcome, double quantile);

// Fraction of rows where (predicted >= threshold) matches the 0/1 label.
double OutcomeAccuracy(std::span<const double> predicted, std::span<const double> actual,
                       double threshold = 0.5);

// Mean of true_tau(i, assigned(i)) with unassigned rows contributing 0.
// Column j of true_tau belongs to labels[j].
double PolicyValue(const Assignment& assignment, const Matrix& true_tau,
                   std::span<const int> labels);

// Pearson correlation of average ranks.
double SpearmanCorrelation(std::span<const double> a, std::span<const double> b);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_EVALUATE_H_
