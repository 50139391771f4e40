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

#include "multiuplift/metalearn.h"

#include <algorithm>

#include "multiuplift/random.h"

namespace multiuplift {
namespace {

struct ArmData {
  Matrix x;
  std::vector<double> y;
};

void CheckBinaryTreatment(const CampaignDataset& dataset) {
  bool has_treated = false;
  for (const int t : dataset.treatments()) {
    if (t > 1) {
      throw ValidationError("meta-learner expects treatment labels {0, 1}, found " +
                            std::to_string(t) + "; use FilterOneVsControl first");
    }
    if (t == 1) has_treated = true;
  }
  if (!has_treated) throw FitError("no treated rows");
}

ArmData Arm(const CampaignDataset& dataset, int arm) {
  std::vector<Eigen::Index> rows;
  ArmData out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.treatments()[i] == arm) {
      rows.push_back(static_cast<Eigen::Index>(i));
      out.y.push_back(dataset.outcomes()[i]);
    }
  }
  if (rows.empty()) {
    throw FitError(arm == 0 ? "no control rows" : "no treated rows");
  }
  out.x = dataset.features()(rows, Eigen::all);
  return out;
}

Matrix WithIndicator(const Matrix& x, double value) {
  Matrix out(x.rows(), x.cols() + 1);
  out.leftCols(x.cols()) = x;
  out.col(x.cols()).setConstant(value);
  return out;
}

OutcomeModel FitOutcome(const Matrix& x, std::span<const double> y, bool binary,
                        const MetaFitOptions& options, std::string_view stream) {
  if (!binary) {
    if (options.calibrated) {
      throw ValidationError("isotonic calibration requires binary outcomes");
    }
    return FitRidge(x, y, options.fit.l2);
  }
  const bool has_pos = std::find(y.begin(), y.end(), 1.0) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), 0.0) != y.end();
  if (options.calibrated) {
    if (!has_pos || !has_neg) {
      throw FitError("outcome is single-class; cannot calibrate");
    }
    return CalibratedFit(x, y, options.fit, options.folds,
                         StreamSeed(options.seed, stream));
  }
  return FitLogistic(x, y, options.fit);
}

void CheckColumns(const FittedMetaModel& model, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.feature_names.size()) {
    throw ValidationError("model expects " + std::to_string(model.feature_names.size()) +
                          " feature columns, got " + std::to_string(x.cols()));
  }
}

FittedMetaModel Skeleton(MetaKind kind, const CampaignDataset& dataset) {
  CheckBinaryTreatment(dataset);
  FittedMetaModel model;
  model.kind = kind;
  model.feature_names = dataset.feature_names();
  model.binary_outcome = dataset.HasBinaryOutcomes();
  return model;
}

}  // namespace

const char* MetaKindName(MetaKind kind) {
  switch (kind) {
    case MetaKind::kS:
      return "S";
    case MetaKind::kT:
      return "T";
    case MetaKind::kX:
      return "X";
  }
  return "?";
}

MetaKind ParseMetaKind(const std::string& name) {
  if (name == "S" || name == "s") return MetaKind::kS;
  if (name == "T" || name == "t") return MetaKind::kT;
  if (name == "X" || name == "x") return MetaKind::kX;
  throw ValidationError("unknown learner '" + name + "' (expected S, T or X)");
}

std::vector<double> PredictOutcome(const OutcomeModel& model, const Matrix& x) {
  if (const auto* linear = std::get_if<LinearModel>(&model)) {
    return linear->kind == LinearKind::kLogistic ? PredictProba(*linear, x)
                                                 : Predict(*linear, x);
  }
  return PredictProba(std::get<CalibratedLearner>(model), x);
}

void FittedMetaModel::Validate() const {
  const bool s = kind == MetaKind::kS;
  const bool tx = kind == MetaKind::kT || kind == MetaKind::kX;
  const bool x = kind == MetaKind::kX;
  if (s_model.has_value() != s || mu0.has_value() != tx || mu1.has_value() != tx ||
      tau0.has_value() != x || tau1.has_value() != x || propensity.has_value() != x) {
    throw ValidationError(std::string(MetaKindName(kind)) +
                          "-learner has the wrong set of submodels");
  }
}

FittedMetaModel FitS(const CampaignDataset& dataset, const MetaFitOptions& options) {
  FittedMetaModel model = Skeleton(MetaKind::kS, dataset);
  const Matrix& x = dataset.features();
  Matrix augmented(x.rows(), x.cols() + 1);
  augmented.leftCols(x.cols()) = x;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    augmented(static_cast<Eigen::Index>(i), x.cols()) = dataset.treatments()[i];
  }
  Arm(dataset, 0);  // both arms must be present
  model.s_model =
      FitOutcome(augmented, dataset.outcomes(), model.binary_outcome, options, "s-model");
  return model;
}

FittedMetaModel FitT(const CampaignDataset& dataset, const MetaFitOptions& options) {
  FittedMetaModel model = Skeleton(MetaKind::kT, dataset);
  const ArmData control = Arm(dataset, 0);
  const ArmData treated = Arm(dataset, 1);
  model.mu0 = FitOutcome(control.x, control.y, model.binary_outcome, options, "mu0");
  model.mu1 = FitOutcome(treated.x, treated.y, model.binary_outcome, options, "mu1");
  return model;
}

FittedMetaModel FitX(const CampaignDataset& dataset, const MetaFitOptions& options) {
  FittedMetaModel model = Skeleton(MetaKind::kX, dataset);
  const ArmData control = Arm(dataset, 0);
  const ArmData treated = Arm(dataset, 1);
  model.mu0 = FitOutcome(control.x, control.y, model.binary_outcome, options, "mu0");
  model.mu1 = FitOutcome(treated.x, treated.y, model.binary_outcome, options, "mu1");

  std::vector<double> d1 = PredictOutcome(*model.mu0, treated.x);
  for (std::size_t i = 0; i < d1.size(); ++i) d1[i] = treated.y[i] - d1[i];
  std::vector<double> d0 = PredictOutcome(*model.mu1, control.x);
  for (std::size_t j = 0; j < d0.size(); ++j) d0[j] = d0[j] - control.y[j];

  model.tau1 = FitRidge(treated.x, d1, options.fit.l2);
  model.tau0 = FitRidge(control.x, d0, options.fit.l2);
  model.propensity = FitPropensity(dataset, options.fit);
  return model;
}

FittedMetaModel FitMeta(MetaKind kind, const CampaignDataset& dataset,
                        const MetaFitOptions& options) {
  switch (kind) {
    case MetaKind::kS:
      return FitS(dataset, options);
    case MetaKind::kT:
      return FitT(dataset, options);
    case MetaKind::kX:
      return FitX(dataset, options);
  }
  throw ValidationError("unknown meta-learner kind");
}

std::vector<double> PredictArmOutcome(const FittedMetaModel& model, const Matrix& x,
                                      int arm) {
  CheckColumns(model, x);
  if (arm != 0 && arm != 1) throw ValidationError("arm must be 0 or 1");
  model.Validate();
  if (model.kind == MetaKind::kS) {
    return PredictOutcome(*model.s_model, WithIndicator(x, arm));
  }
  return PredictOutcome(arm == 0 ? *model.mu0 : *model.mu1, x);
}

std::vector<double> PredictCate(const FittedMetaModel& model, const Matrix& x,
                                const PredictOptions& options) {
  CheckColumns(model, x);
  model.Validate();
  if (model.kind != MetaKind::kX) {
    std::vector<double> treated = PredictArmOutcome(model, x, 1);
    const std::vector<double> control = PredictArmOutcome(model, x, 0);
    for (std::size_t i = 0; i < treated.size(); ++i) treated[i] -= control[i];
    return treated;
  }

  const std::vector<double> tau0 = Predict(*model.tau0, x);
  const std::vector<double> tau1 = Predict(*model.tau1, x);
  std::vector<double> g;
  if (options.forced_propensity.has_value()) {
    g.assign(tau0.size(), *options.forced_propensity);
  } else {
    g = PredictProba(*model.propensity, x);
    for (double& v : g) v = std::clamp(v, kPropensityClipLow, kPropensityClipHigh);
  }
  std::vector<double> cate(tau0.size());
  for (std::size_t i = 0; i < cate.size(); ++i) {
    cate[i] = g[i] * tau0[i] + (1.0 - g[i]) * tau1[i];
    if (model.binary_outcome) cate[i] = std::clamp(cate[i], -1.0, 1.0);
  }
  return cate;
}

std::vector<int> MultiTreatmentModel::labels() const {
  std::vector<int> out;
  for (const auto& [label, unused] : per_treatment) out.push_back(label);
  return out;
}

MultiTreatmentModel FitMultiTreatment(const CampaignDataset& dataset, MetaKind kind,
                                      const MetaFitOptions& options) {
  const std::vector<int> labels = dataset.TreatmentLabels();
  if (labels.empty()) throw FitError("dataset has no treated rows");
  MultiTreatmentModel out;
  out.kind = kind;
  out.calibrated = options.calibrated;
  out.feature_names = dataset.feature_names();
  for (const int t : labels) {
    try {
      out.per_treatment.emplace(t, FitMeta(kind, FilterOneVsControl(dataset, t), options));
    } catch (const FitError& e) {
      throw FitError("treatment " + std::to_string(t) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("treatment " + std::to_string(t) + ": " + e.what());
    }
  }
  return out;
}

Matrix PredictUpliftMatrix(const MultiTreatmentModel& model, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.feature_names.size()) {
    throw ValidationError("model expects " + std::to_string(model.feature_names.size()) +
                          " feature columns, got " + std::to_string(x.cols()));
  }
  Matrix scores(x.rows(), static_cast<Eigen::Index>(model.per_treatment.size()));
  Eigen::Index col = 0;
  for (const auto& [label, sub] : model.per_treatment) {
    const auto cate = PredictCate(sub, x);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      scores(i, col) = cate[static_cast<std::size_t>(i)];
    }
    ++col;
  }
  return scores;
}

}  // namespace multiuplift
