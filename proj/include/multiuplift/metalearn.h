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

#ifndef MULTIUPLIFT_METALEARN_H_
#define MULTIUPLIFT_METALEARN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "multiuplift/baselearn.h"
#include "multiuplift/calibrate.h"
#include "multiuplift/dataset.h"

namespace multiuplift {

enum class MetaKind { kS, kT, kX };

const char* MetaKindName(MetaKind kind);
MetaKind ParseMetaKind(const std::string& name);

// An outcome-response model: plain logistic or ridge, or a cross-fitted
// isotonic-calibrated logistic model. New base learners are added as
// alternatives here; meta-learners only call PredictOutcome.
using OutcomeModel = std::variant<LinearModel, CalibratedLearner>;

// Probabilities for logistic / calibrated models, affine values for ridge.
std::vector<double> PredictOutcome(const OutcomeModel& model, const Matrix& x);

// One treatment against control.
//   S: s_model over features plus a trailing 0/1 treatment column.
//   T: mu0 on control rows, mu1 on treated rows.
//   X: T's mu0/mu1, ridge effect models tau1 (treated pseudo-effects
//      y - mu0(x)) and tau0 (control pseudo-effects mu1(x) - y), and a
//      propensity model used as the blending weight g(x).
struct FittedMetaModel {
  MetaKind kind = MetaKind::kT;
  std::vector<std::string> feature_names;
  bool binary_outcome = true;
  std::optional<OutcomeModel> s_model;
  std::optional<OutcomeModel> mu0;
  std::optional<OutcomeModel> mu1;
  std::optional<LinearModel> tau0;
  std::optional<LinearModel> tau1;
  std::optional<LinearModel> propensity;

  // Throws ValidationError unless exactly the submodels for `kind` are set.
  void Validate() const;
};

struct MetaFitOptions {
  FitConfig fit;
  bool calibrated = false;
  int folds = 5;
  std::uint64_t seed = 0;
};

// Inputs must carry treatment labels {0, 1} with both present. Continuous
// (non 0/1) outcomes switch the S/T outcome models to ridge.
FittedMetaModel FitS(const CampaignDataset& dataset, const MetaFitOptions& options);
FittedMetaModel FitT(const CampaignDataset& dataset, const MetaFitOptions& options);
FittedMetaModel FitX(const CampaignDataset& dataset, const MetaFitOptions& options);
FittedMetaModel FitMeta(MetaKind kind, const CampaignDataset& dataset,
                        const MetaFitOptions& options);

inline constexpr double kPropensityClipLow = 0.01;
inline constexpr double kPropensityClipHigh = 0.99;

struct PredictOptions {
  // Overrides g(x) for the X-learner; bypasses the propensity clip.
  std::optional<double> forced_propensity;
};

// S: mu(x,1) - mu(x,0). T: mu1(x) - mu0(x).
// X: g(x) tau0(x) + (1 - g(x)) tau1(x), clipped to [-1, 1] for binary outcomes.
std::vector<double> PredictCate(const FittedMetaModel& model, const Matrix& x,
                                const PredictOptions& options = {});

// Predicted outcome under control (arm 0) or treatment (arm 1).
std::vector<double> PredictArmOutcome(const FittedMetaModel& model, const Matrix& x,
                                      int arm);

struct MultiTreatmentModel {
  MetaKind kind = MetaKind::kT;
  bool calibrated = false;
  std::vector<std::string> feature_names;
  std::map<int, FittedMetaModel> per_treatment;

  std::vector<int> labels() const;
};

// One single-treatment model per non-control label t, each fitted on
// FilterOneVsControl(dataset, t) with the same options.
MultiTreatmentModel FitMultiTreatment(const CampaignDataset& dataset, MetaKind kind,
                                      const MetaFitOptions& options);

// n x K, column order by ascending treatment label.
Matrix PredictUpliftMatrix(const MultiTreatmentModel& model, const Matrix& x);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_METALEARN_H_
