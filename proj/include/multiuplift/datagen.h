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

#ifndef MULTIUPLIFT_DATAGEN_H_
#define MULTIUPLIFT_DATAGEN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "multiuplift/common.h"
#include "multiuplift/dataset.h"

namespace multiuplift {

// Closed-form treatment-effect function of the feature row. Text form
// (feature indices are 0-based):
//   constant:<c>
//   linear:<b>:<w0>,<w1>,...[:<lo>:<hi>]   b + w.x, optionally clipped
//   step:<j>:<threshold>:<low>:<high>       high if x_j > threshold else low
//   logistic:<j>:<offset>:<amplitude>:<slope>
//                                           offset + amplitude * sigmoid(slope * x_j)
struct TauSpec {
  enum class Kind { kConstant, kLinear, kStep, kLogistic };
  Kind kind = Kind::kConstant;
  double offset = 0.0;
  std::vector<double> weights;
  int feature = 0;
  double threshold = 0.0;
  double low = 0.0;
  double high = 0.0;
  double amplitude = 0.0;
  double slope = 0.0;
  bool clipped = false;

  static TauSpec Constant(double c);
  static TauSpec Linear(double intercept, std::vector<double> weights);
  static TauSpec ClippedLinear(double intercept, std::vector<double> weights, double lo,
                               double hi);
  static TauSpec Step(int feature, double threshold, double low, double high);
  static TauSpec Logistic(int feature, double offset, double amplitude, double slope);
  static TauSpec Parse(const std::string& text);

  double Evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  // Largest feature index referenced, or -1.
  int MaxFeature() const;
};

struct GeneratorConfig {
  std::size_t n = 1000;
  std::size_t d = 1;
  // Control first, then treatments 1..K.
  std::vector<double> assignment_probs = {0.5, 0.5};
  std::vector<double> base_weights = {0.0};
  double base_intercept = 0.0;
  // tau_specs[t - 1] is the effect of treatment t.
  std::vector<TauSpec> tau_specs = {TauSpec::Constant(0.0)};
  std::uint64_t seed = 0;

  std::size_t num_treatments() const { return tau_specs.size(); }
  void Validate() const;
};

inline constexpr double kProbClipLow = 0.01;
inline constexpr double kProbClipHigh = 0.99;

struct GroundTruth {
  // n x K effective effects: clip(base + tau_t) - base.
  Matrix tau;
  // clip(sigmoid(base_intercept + base_weights . x)).
  std::vector<double> base_prob;
};

struct SimulatedCampaign {
  CampaignDataset data;
  GroundTruth truth;
};

// Randomised trial with standard-normal features, treatment drawn from
// assignment_probs independently of x, and outcome ~ Bernoulli(base_prob
// + tau_t) for treated rows (base_prob for control). Streams: feature
// column j uses StreamSeed(seed, "feature", j); treatment and outcome draws
// use the "treatment" and "outcome" streams, one uniform per row each.
SimulatedCampaign Generate(const GeneratorConfig& config);

// n = 20000, d = 5, K = 2, probabilities (0.4, 0.3, 0.3),
// tau_1 = 0.05 + 0.10 sigmoid(2 x_0)   (wide spread),
// tau_2 = 0.08 + 0.02 x_1 in [0, 0.16]  (narrow spread).
GeneratorConfig DefaultCampaignConfig(std::uint64_t seed);
SimulatedCampaign DefaultCampaign(std::uint64_t seed);

// customer_id,true_tau_1,...,true_tau_K,base_prob
std::string GroundTruthToCsv(const std::vector<std::string>& customer_ids,
                             const GroundTruth& truth);
struct LoadedGroundTruth {
  std::vector<std::string> customer_ids;
  std::vector<int> labels;
  GroundTruth truth;
};
LoadedGroundTruth ReadGroundTruthCsv(const std::filesystem::path& path);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_DATAGEN_H_
