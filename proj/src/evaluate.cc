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

#include "multiuplift/evaluate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multiuplift/random.h"

namespace multiuplift {
namespace {

void CheckArms(std::span<const int> treatment, std::size_t n_outcome) {
  if (treatment.size() != n_outcome) {
    throw ValidationError("treatment and outcome differ in length");
  }
  bool treated = false, control = false;
  for (const int t : treatment) {
    if (t == 1) {
      treated = true;
    } else if (t == 0) {
      control = true;
    } else {
      throw ValidationError("uplift metrics need treatment indicators 0/1, got " +
                            std::to_string(t));
    }
  }
  if (!treated || !control) {
    throw ValidationError("uplift metrics need both treated and control rows");
  }
}

std::vector<std::size_t> DescendingOrder(std::span<const double> score) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return order;
}

UpliftCurve CurveFromOrder(std::span<const std::size_t> order,
                           std::span<const int> treatment,
                           std::span<const double> outcome, int n_bins) {
  const std::size_t n = order.size();
  UpliftCurve curve;
  curve.fractions.reserve(static_cast<std::size_t>(n_bins));
  curve.cumulative_uplift.reserve(static_cast<std::size_t>(n_bins));
  double treated_sum = 0.0, control_sum = 0.0;
  std::size_t treated_n = 0, control_n = 0, pos = 0;
  const auto bins = static_cast<std::size_t>(n_bins);
  for (std::size_t b = 1; b <= bins; ++b) {
    const std::size_t end = (b * n + bins - 1) / bins;
    for (; pos < end; ++pos) {
      const std::size_t i = order[pos];
      if (treatment[i] == 1) {
        treated_sum += outcome[i];
        ++treated_n;
      } else {
        control_sum += outcome[i];
        ++control_n;
      }
    }
    double uplift = 0.0;
    if (treated_n > 0 && control_n > 0) {
      uplift = treated_sum / static_cast<double>(treated_n) -
               control_sum / static_cast<double>(control_n);
    }
    curve.fractions.push_back(static_cast<double>(end) / static_cast<double>(n));
    curve.cumulative_uplift.push_back(uplift);
  }
  return curve;
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

UpliftCurve ComputeUpliftCurve(std::span<const double> score,
                               std::span<const int> treatment,
                               std::span<const double> outcome, int n_bins) {
  if (score.size() != outcome.size()) {
    throw ValidationError("score and outcome differ in length");
  }
  CheckArms(treatment, outcome.size());
  if (n_bins < 1 || static_cast<std::size_t>(n_bins) > score.size()) {
    throw ValidationError("n_bins must lie in [1, n], got " + std::to_string(n_bins) +
                          " for n = " + std::to_string(score.size()));
  }
  const auto order = DescendingOrder(score);
  return CurveFromOrder(order, treatment, outcome, n_bins);
}

double Auuc(const UpliftCurve& curve) {
  double area = 0.0;
  double prev_x = 0.0, prev_y = 0.0;
  for (std::size_t b = 0; b < curve.fractions.size(); ++b) {
    const double x = curve.fractions[b];
    const double y = curve.cumulative_uplift[b];
    area += (x - prev_x) * (prev_y + y) / 2.0;
    prev_x = x;
    prev_y = y;
  }
  return area;
}

RandomBaseline AuucRandomBaseline(std::span<const int> treatment,
                                  std::span<const double> outcome, int n_shuffles,
                                  std::uint64_t seed, int n_bins) {
  CheckArms(treatment, outcome.size());
  if (n_shuffles < 1) throw ValidationError("n_shuffles must be >= 1");
  if (n_bins < 1 || static_cast<std::size_t>(n_bins) > outcome.size()) {
    throw ValidationError("n_bins must lie in [1, n]");
  }
  RandomBaseline out;
  out.samples.resize(static_cast<std::size_t>(n_shuffles));
#pragma omp parallel for schedule(static)
  for (int s = 0; s < n_shuffles; ++s) {
    Rng rng(StreamSeed(seed, "auuc-random", static_cast<std::uint64_t>(s)));
    const auto order = Permutation(outcome.size(), rng);
    out.samples[static_cast<std::size_t>(s)] =
        Auuc(CurveFromOrder(order, treatment, outcome, n_bins));
  }
  out.mean = std::accumulate(out.samples.begin(), out.samples.end(), 0.0) /
             static_cast<double>(n_shuffles);
  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  const double h = 0.95 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  out.p95 = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  return out;
}

QuantileLift LiftAtQuantile(std::span<const double> score, std::span<const int> treatment,
                            std::span<const double> outcome, double quantile) {
  if (score.size() != outcome.size()) {
    throw ValidationError("score and outcome differ in length");
  }
  CheckArms(treatment, outcome.size());
  if (!(quantile > 0.0 && quantile <= 1.0)) {
    throw ValidationError("quantile must lie in (0, 1]");
  }
  const std::size_t n = score.size();
  double control_sum = 0.0;
  std::size_t control_n = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (treatment[i] == 0) {
      control_sum += outcome[i];
      ++control_n;
    }
  }
  const auto order = DescendingOrder(score);
  const auto top = std::min(
      n, static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n) - 1e-9)));
  double treated_sum = 0.0;
  std::size_t treated_n = 0;
  for (std::size_t r = 0; r < top; ++r) {
    const std::size_t i = order[r];
    if (treatment[i] == 1) {
      treated_sum += outcome[i];
      ++treated_n;
    }
  }
  QuantileLift out;
  out.quantile = quantile;
  out.treated_rate = treated_n > 0 ? treated_sum / static_cast<double>(treated_n) : 0.0;
  out.baseline_rate = control_sum / static_cast<double>(control_n);
  if (out.baseline_rate > 0.0) out.lift_ratio = out.treated_rate / out.baseline_rate;
  return out;
}

double OutcomeAccuracy(std::span<const double> predicted, std::span<const double> actual,
                       double threshold) {
  if (predicted.size() != actual.size()) {
    throw ValidationError("predicted and actual differ in length");
  }
  if (predicted.empty()) throw ValidationError("accuracy of an empty sample");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double label = predicted[i] >= threshold ? 1.0 : 0.0;
    if (label == actual[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double PolicyValue(const Assignment& assignment, const Matrix& true_tau,
                   std::span<const int> labels) {
  if (static_cast<std::size_t>(true_tau.rows()) != assignment.size()) {
    throw ValidationError("ground truth has " + std::to_string(true_tau.rows()) +
                          " rows, assignment has " + std::to_string(assignment.size()));
  }
  if (static_cast<std::size_t>(true_tau.cols()) != labels.size()) {
    throw ValidationError("ground-truth columns do not match treatment labels");
  }
  if (assignment.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const int label = assignment.assigned[i];
    if (label == kNoTreatment) continue;
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
      throw ValidationError("assigned treatment " + std::to_string(label) +
                            " has no ground-truth column");
    }
    total += true_tau(static_cast<Eigen::Index>(i), it - labels.begin());
  }
  return total / static_cast<double>(assignment.size());
}

double SpearmanCorrelation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ValidationError("spearman needs two equal-length samples of size >= 2");
  }
  const auto ra = AverageRanks(a);
  const auto rb = AverageRanks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace multiuplift
