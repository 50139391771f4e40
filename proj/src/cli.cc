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

#include "multiuplift/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "multiuplift/calibrate.h"
#include "multiuplift/csv.h"
#include "multiuplift/datagen.h"
#include "multiuplift/dataset.h"
#include "multiuplift/evaluate.h"
#include "multiuplift/metalearn.h"
#include "multiuplift/model_io.h"
#include "multiuplift/random.h"
#include "multiuplift/selection.h"

namespace multiuplift::cli {
namespace {

namespace fs = std::filesystem;

struct ColumnFlags {
  ColumnNames names;

  void Register(CLI::App* cmd) {
    cmd->add_option("--id-column", names.id, "Customer id column")->capture_default_str();
    cmd->add_option("--treatment-column", names.treatment, "Treatment label column")
        ->capture_default_str();
    cmd->add_option("--outcome-column", names.outcome, "Outcome column")
        ->capture_default_str();
  }
};

struct SimulateFlags {
  std::string preset = "default";
  std::uint64_t seed = 0;
  std::string out;
  std::size_t n = 20000;
  std::size_t d = 5;
  std::string probs;
  std::string base_weights;
  double base_intercept = 0.0;
  std::vector<std::string> tau;
};

struct TrainFlags {
  std::string data;
  std::string out;
  std::string learner = "T";
  bool calibrated = false;
  int folds = 5;
  std::uint64_t seed = 0;
  FitConfig fit;
  ColumnFlags columns;
};

struct ScoreFlags {
  std::string data;
  std::string model;
  std::string out;
  ColumnFlags columns;
};

struct SelectFlags {
  std::string scores;
  std::string strategy = "zscore";
  double top_fraction = 1.0;
  std::string out;
};

struct EvaluateFlags {
  std::string data;
  std::vector<std::string> scores;
  std::vector<std::string> models;
  std::vector<std::string> assignments;
  std::string truth;
  std::string out;
  double top_fraction = 1.0;
  int n_bins = 100;
  int shuffles = 200;
  std::uint64_t seed = 0;
  ColumnFlags columns;
};

std::vector<double> ParseList(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    double v = 0.0;
    if (!csv::ParseDouble(item, v) || !std::isfinite(v)) {
      throw ValidationError(flag + ": bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

// NAME=PATH pairs in flag order; names must be unique.
std::vector<std::pair<std::string, std::string>> ParseNamed(
    const std::vector<std::string>& items, const std::string& flag) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> names;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ValidationError(flag + ": expected NAME=PATH, got '" + item + "'");
    }
    std::string name = item.substr(0, eq);
    if (!names.insert(name).second) {
      throw ValidationError(flag + ": duplicate name '" + name + "'");
    }
    out.emplace_back(std::move(name), item.substr(eq + 1));
  }
  return out;
}

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'" +
                  (ec ? ": " + ec.message() : ""));
  }
}

void EnsureParent(const fs::path& file) {
  const fs::path parent = file.parent_path();
  if (!parent.empty()) EnsureDirectory(parent);
}

void RequireFile(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("missing input file '" + path.string() + "'");
}

std::string NaOr(const std::optional<double>& value) {
  return value.has_value() ? csv::FormatDouble(*value) : "NA";
}

// --- simulate -------------------------------------------------------------

int Simulate(const SimulateFlags& flags, std::ostream& out) {
  GeneratorConfig config;
  if (flags.preset == "default") {
    config = DefaultCampaignConfig(flags.seed);
  } else {
    config.n = flags.n;
    config.d = flags.d;
    config.seed = flags.seed;
    config.base_intercept = flags.base_intercept;
    config.base_weights = flags.base_weights.empty()
                              ? std::vector<double>(flags.d, 0.0)
                              : ParseList(flags.base_weights, "--base-weights");
    if (flags.tau.empty()) throw ValidationError("--tau: custom preset needs at least one");
    config.tau_specs.clear();
    for (const auto& spec : flags.tau) config.tau_specs.push_back(TauSpec::Parse(spec));
    if (flags.probs.empty()) {
      config.assignment_probs.assign(config.tau_specs.size() + 1,
                                     1.0 / static_cast<double>(config.tau_specs.size() + 1));
    } else {
      config.assignment_probs = ParseList(flags.probs, "--probs");
    }
    try {
      config.Validate();
    } catch (const ValidationError& e) {
      const std::string message = e.what();
      const std::string flag =
          message.rfind("probs", 0) == 0 ? "--probs"
          : message.rfind("base weights", 0) == 0 ? "--base-weights"
          : message.rfind("tau", 0) == 0 ? "--tau"
          : message.rfind("n ", 0) == 0 ? "--n"
                                          : "--preset custom";
      throw ValidationError(flag + ": " + message);
    }
  }
  const SimulatedCampaign campaign = Generate(config);
  const std::string data_csv = ToCsv(campaign.data);
  const std::string truth_csv = GroundTruthToCsv(campaign.data.customer_ids(), campaign.truth);

  const fs::path dir(flags.out);
  EnsureDirectory(dir);
  csv::WriteFileAtomic(dir / "campaign.csv", data_csv);
  csv::WriteFileAtomic(dir / "ground_truth.csv", truth_csv);
  out << "wrote " << campaign.data.size() << " rows, " << campaign.data.num_features()
      << " features, " << config.num_treatments() << " treatments to " << dir.string()
      << "\n";
  return kExitOk;
}

// --- train ----------------------------------------------------------------

int Train(const TrainFlags& flags, std::ostream& out) {
  const MetaKind kind = ParseMetaKind(flags.learner);
  flags.fit.Validate();
  if (flags.calibrated && flags.folds < 2) throw ValidationError("--folds must be >= 2");
  RequireFile(flags.data);
  CampaignDataset data = [&] {
    try {
      return LoadCsv(flags.data, flags.columns.names);
    } catch (const MissingControlError& e) {
      // Without a control arm no meta-learner can be fitted.
      throw FitError(e.what());
    }
  }();
  MetaFitOptions options;
  options.fit = flags.fit;
  options.calibrated = flags.calibrated;
  options.folds = flags.folds;
  options.seed = flags.seed;
  const MultiTreatmentModel model = FitMultiTreatment(data, kind, options);
  SaveModelDirectory(model, flags.out);
  out << "trained " << MetaKindName(kind) << "-learner"
      << (flags.calibrated ? " (calibrated)" : "") << " for " << model.per_treatment.size()
      << " treatment(s) -> " << flags.out << "\n";
  return kExitOk;
}

// --- score ----------------------------------------------------------------

int Score(const ScoreFlags& flags, std::ostream& out) {
  RequireFile(flags.data);
  const MultiTreatmentModel model = LoadModelDirectory(flags.model);
  const FeatureTable table = LoadFeatureCsv(flags.data, flags.columns.names);

  const std::set<std::string> have(table.feature_names.begin(), table.feature_names.end());
  const std::set<std::string> want(model.feature_names.begin(), model.feature_names.end());
  std::string missing, extra;
  for (const auto& name : want) {
    if (!have.count(name)) missing += (missing.empty() ? "" : ",") + name;
  }
  for (const auto& name : have) {
    if (!want.count(name)) extra += (extra.empty() ? "" : ",") + name;
  }
  if (!missing.empty() || !extra.empty()) {
    throw ValidationError("feature columns do not match the model; missing: [" + missing +
                          "], extra: [" + extra + "]");
  }
  std::vector<Eigen::Index> order;
  for (const auto& name : model.feature_names) {
    order.push_back(std::find(table.feature_names.begin(), table.feature_names.end(), name) -
                    table.feature_names.begin());
  }
  const Matrix x = table.features(Eigen::all, order);

  UpliftScores scores;
  scores.customer_ids = table.customer_ids;
  scores.treatment_labels = model.labels();
  scores.scores = PredictUpliftMatrix(model, x);
  const std::string text = ScoresToCsv(scores);
  EnsureParent(flags.out);
  csv::WriteFileAtomic(flags.out, text);
  out << "scored " << scores.size() << " customers x " << scores.treatment_labels.size()
      << " treatment(s) -> " << flags.out << "\n";
  return kExitOk;
}

// --- select ---------------------------------------------------------------

Assignment SelectWith(const std::string& strategy, const UpliftScores& scores,
                      double top_fraction) {
  const Assignment raw =
      strategy == "rank" ? DirectRankAssign(scores) : ZScoreAssign(scores);
  return ApplyCutoff(raw, scores, top_fraction);
}

int Select(const SelectFlags& flags, std::ostream& out) {
  if (!(flags.top_fraction > 0.0 && flags.top_fraction <= 1.0)) {
    throw ValidationError("--top-fraction must lie in (0, 1]");
  }
  RequireFile(flags.scores);
  const UpliftScores scores = ReadScoresCsv(flags.scores);
  if (flags.strategy == "zscore" && scores.size() < 2) {
    throw ValidationError("--strategy zscore needs at least 2 customers");
  }
  const Assignment assignment = SelectWith(flags.strategy, scores, flags.top_fraction);
  EnsureParent(flags.out);
  csv::WriteFileAtomic(flags.out, AssignmentToCsv(assignment));
  out << "assigned " << assignment.CountAssigned() << " of " << assignment.size()
      << " customers (" << flags.strategy << ") -> " << flags.out << "\n";
  return kExitOk;
}

// --- evaluate -------------------------------------------------------------

struct ArmView {
  std::vector<std::size_t> rows;
  std::vector<int> treatment;
  std::vector<double> outcome;
};

ArmView OneVsControl(const CampaignDataset& data, int label) {
  ArmView view;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int t = data.treatments()[i];
    if (t != 0 && t != label) continue;
    view.rows.push_back(i);
    view.treatment.push_back(t == label ? 1 : 0);
    view.outcome.push_back(data.outcomes()[i]);
  }
  return view;
}

int Evaluate(const EvaluateFlags& flags, std::ostream& out) {
  if (!(flags.top_fraction > 0.0 && flags.top_fraction <= 1.0)) {
    throw ValidationError("--top-fraction must lie in (0, 1]");
  }
  if (flags.n_bins < 1) throw ValidationError("--n-bins must be >= 1");
  if (flags.shuffles < 1) throw ValidationError("--shuffles must be >= 1");
  const auto score_files = ParseNamed(flags.scores, "--scores");
  const auto model_dirs = ParseNamed(flags.models, "--model");
  const auto assignment_files = ParseNamed(flags.assignments, "--assignment");
  if (score_files.empty()) throw ValidationError("--scores: at least one is required");

  RequireFile(flags.data);
  for (const auto& [name, path] : score_files) RequireFile(path);
  for (const auto& [name, path] : assignment_files) RequireFile(path);
  if (!flags.truth.empty()) RequireFile(flags.truth);

  const CampaignDataset data = LoadCsv(flags.data, flags.columns.names);
  const bool binary = data.HasBinaryOutcomes();

  std::map<std::string, UpliftScores> scores;
  for (const auto& [name, path] : score_files) {
    UpliftScores s = ReadScoresCsv(path);
    if (s.customer_ids != data.customer_ids()) {
      throw ValidationError("--scores " + name +
                            ": customer_ids do not match the dataset row for row");
    }
    for (const int label : s.treatment_labels) {
      if (data.CountLabel(label) == 0) {
        throw ValidationError("--scores " + name + ": treatment " + std::to_string(label) +
                              " has no rows in the dataset");
      }
    }
    scores.emplace(name, std::move(s));
  }
  std::map<std::string, MultiTreatmentModel> models;
  for (const auto& [name, dir] : model_dirs) {
    if (!scores.count(name)) {
      throw ValidationError("--model " + name + ": no --scores entry with that name");
    }
    MultiTreatmentModel model = LoadModelDirectory(dir);
    if (model.feature_names != data.feature_names()) {
      throw ValidationError("--model " + name + ": feature columns differ from the dataset");
    }
    models.emplace(name, std::move(model));
  }
  std::optional<LoadedGroundTruth> truth;
  if (!flags.truth.empty()) {
    truth = ReadGroundTruthCsv(flags.truth);
    if (truth->customer_ids != data.customer_ids()) {
      throw ValidationError("--truth: customer_ids do not match the dataset row for row");
    }
  }
  std::vector<std::pair<std::string, Assignment>> assignments;
  for (const auto& [name, path] : assignment_files) {
    Assignment a = ReadAssignmentCsv(path);
    if (a.customer_ids != data.customer_ids()) {
      throw ValidationError("--assignment " + name +
                            ": customer_ids do not match the dataset row for row");
    }
    assignments.emplace_back(name, std::move(a));
  }
  if (!assignments.empty() && !truth) {
    throw ValidationError("--assignment needs --truth to compute policy value");
  }

  // Everything is computed in memory before any file is written.
  std::map<std::string, std::string> files;
  std::string metrics =
      "model,treatment,auuc,auuc_random_mean,lift_top10,lift_top20,accuracy,ece\n";
  std::set<int> all_labels;
  for (const auto& [name, s] : scores) {
    all_labels.insert(s.treatment_labels.begin(), s.treatment_labels.end());
  }
  std::map<int, RandomBaseline> baselines;
  for (const int label : all_labels) {
    const ArmView view = OneVsControl(data, label);
    baselines.emplace(label, AuucRandomBaseline(view.treatment, view.outcome, flags.shuffles,
                                                StreamSeed(flags.seed, "evaluate", label),
                                                flags.n_bins));
  }

  for (const auto& [name, s] : scores) {
    for (std::size_t j = 0; j < s.treatment_labels.size(); ++j) {
      const int label = s.treatment_labels[j];
      const ArmView view = OneVsControl(data, label);
      std::vector<double> score;
      for (const std::size_t i : view.rows) {
        score.push_back(s.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
      const UpliftCurve curve =
          ComputeUpliftCurve(score, view.treatment, view.outcome, flags.n_bins);
      const auto top10 = LiftAtQuantile(score, view.treatment, view.outcome, 0.1);
      const auto top20 = LiftAtQuantile(score, view.treatment, view.outcome, 0.2);
      std::optional<double> accuracy, ece;
      const auto model_it = models.find(name);
      if (model_it != models.end() && binary) {
        const auto sub = model_it->second.per_treatment.find(label);
        if (sub != model_it->second.per_treatment.end()) {
          std::vector<Eigen::Index> rows(view.rows.begin(), view.rows.end());
          const Matrix x = data.features()(rows, Eigen::all);
          const auto p0 = PredictArmOutcome(sub->second, x, 0);
          const auto p1 = PredictArmOutcome(sub->second, x, 1);
          std::vector<double> factual(rows.size());
          for (std::size_t r = 0; r < rows.size(); ++r) {
            factual[r] = std::clamp(view.treatment[r] == 1 ? p1[r] : p0[r], 0.0, 1.0);
          }
          accuracy = OutcomeAccuracy(factual, view.outcome);
          ece = ExpectedCalibrationError(factual, view.outcome, 10);
        }
      }
      metrics += csv::Escape(name) + "," + std::to_string(label) + "," +
                 csv::FormatDouble(Auuc(curve)) + "," +
                 csv::FormatDouble(baselines.at(label).mean) + "," + NaOr(top10.lift_ratio) +
                 "," + NaOr(top20.lift_ratio) + "," + NaOr(accuracy) + "," + NaOr(ece) + "\n";

      std::string curve_csv = "fraction,cumulative_uplift\n";
      for (std::size_t b = 0; b < curve.fractions.size(); ++b) {
        curve_csv += csv::FormatDouble(curve.fractions[b]) + "," +
                     csv::FormatDouble(curve.cumulative_uplift[b]) + "\n";
      }
      files["curve_" + name + "_t" + std::to_string(label) + ".csv"] = std::move(curve_csv);
    }
  }
  for (const auto& [label, baseline] : baselines) {
    metrics += "random," + std::to_string(label) + "," + csv::FormatDouble(baseline.mean) +
               "," + csv::FormatDouble(baseline.mean) + ",NA,NA,NA,NA\n";
  }
  files["metrics.csv"] = std::move(metrics);

  if (truth) {
    std::string policy = "model,strategy,top_fraction,policy_value\n";
    for (const auto& [name, s] : scores) {
      for (const std::string strategy : {"rank", "zscore"}) {
        const Assignment a = SelectWith(strategy, s, flags.top_fraction);
        policy += csv::Escape(name) + "," + strategy + "," +
                  csv::FormatDouble(flags.top_fraction) + "," +
                  csv::FormatDouble(PolicyValue(a, truth->truth.tau, truth->labels)) + "\n";
      }
    }
    for (const auto& [name, a] : assignments) {
      const double kept = static_cast<double>(a.CountAssigned()) /
                          static_cast<double>(a.size());
      policy += csv::Escape(name) + ",file," + csv::FormatDouble(kept) + "," +
                csv::FormatDouble(PolicyValue(a, truth->truth.tau, truth->labels)) + "\n";
    }
    files["policy_value.csv"] = std::move(policy);
  }

  const fs::path dir(flags.out);
  EnsureDirectory(dir);
  for (const auto& [name, content] : files) csv::WriteFileAtomic(dir / name, content);
  out << "wrote " << files.size() << " report file(s) to " << dir.string() << "\n";
  return kExitOk;
}

// Expands `--config FILE` (flat key=value lines, '#' comments) into
// `--key=value` tokens placed right after the subcommand, so that explicit
// flags, which come later, take precedence.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  if (args.size() < 2) return args;
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> out = {args[0], args[1]};
  if (config) {
    if (!fs::exists(*config)) throw IoError("missing config file '" + *config + "'");
    std::stringstream stream(csv::ReadFile(*config));
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ValidationError("--config: line " + std::to_string(line_no) +
                              " is not key=value");
      }
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      out.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int Run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app("Multi-treatment uplift modeling: simulate, train, score, select, evaluate.",
               "uplift");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  const std::string config_help = "Flat key=value file; explicit flags override it";
  SimulateFlags simulate;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic randomized campaign");
  sim->add_option("--preset", simulate.preset, "default or custom")
      ->check(CLI::IsMember({"default", "custom"}))
      ->capture_default_str();
  sim->add_option("--seed", simulate.seed, "Random seed")->capture_default_str();
  sim->add_option("--out", simulate.out, "Output directory")->required();
  sim->add_option("--n", simulate.n, "Rows (custom preset)")->capture_default_str();
  sim->add_option("--d", simulate.d, "Features (custom preset)")->capture_default_str();
  sim->add_option("--probs", simulate.probs,
                  "Assignment probabilities, control first, comma-separated (custom)");
  sim->add_option("--base-weights", simulate.base_weights,
                  "Baseline logit weights, comma-separated (custom)");
  sim->add_option("--base-intercept", simulate.base_intercept, "Baseline logit intercept")
      ->capture_default_str();
  sim->add_option("--tau", simulate.tau,
                  "Effect of the next treatment: constant:c | linear:b:w,..[:lo:hi] | "
                  "step:j:thr:low:high | logistic:j:offset:amp:slope (repeat per treatment)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sim->add_option("--config", config_help);

  TrainFlags train;
  auto* trn = app.add_subcommand("train", "Fit one meta-learner per treatment vs control");
  trn->add_option("--data", train.data, "Campaign CSV")->required();
  trn->add_option("--out", train.out, "Model directory to write")->required();
  trn->add_option("--learner", train.learner, "S, T or X")
      ->check(CLI::IsMember({"S", "T", "X"}))
      ->capture_default_str();
  trn->add_flag("--calibrated", train.calibrated,
                "Wrap outcome models in cross-fitted isotonic calibration");
  trn->add_option("--folds", train.folds, "Calibration folds")->capture_default_str();
  trn->add_option("--seed", train.seed, "Calibration fold seed")->capture_default_str();
  trn->add_option("--l2", train.fit.l2, "L2 penalty")->capture_default_str();
  trn->add_option("--max-iter", train.fit.max_iter, "Gradient-descent iterations")
      ->capture_default_str();
  trn->add_option("--tol", train.fit.tol, "Gradient infinity-norm tolerance")
      ->capture_default_str();
  trn->add_option("--learning-rate", train.fit.learning_rate, "Initial step size")
      ->capture_default_str();
  train.columns.Register(trn);
  trn->add_option("--config", config_help);

  ScoreFlags score;
  auto* scr = app.add_subcommand("score", "Write per-treatment CATE scores");
  scr->add_option("--data", score.data, "Customer CSV")->required();
  scr->add_option("--model", score.model, "Model directory")->required();
  scr->add_option("--out", score.out, "Scores CSV to write")->required();
  score.columns.Register(scr);
  scr->add_option("--config", config_help);

  SelectFlags select;
  auto* sel = app.add_subcommand("select", "Assign each customer an offer");
  sel->add_option("--scores", select.scores, "Scores CSV")->required();
  sel->add_option("--strategy", select.strategy, "rank or zscore")
      ->check(CLI::IsMember({"rank", "zscore"}))
      ->capture_default_str();
  sel->add_option("--top-fraction", select.top_fraction,
                  "Fraction of customers that keep their offer")
      ->capture_default_str();
  sel->add_option("--out", select.out, "Assignment CSV to write")->required();
  sel->add_option("--config", config_help);

  EvaluateFlags evaluate;
  auto* evl = app.add_subcommand("evaluate", "AUUC, quantile lift, accuracy, ECE, policy value");
  evl->add_option("--data", evaluate.data, "Campaign CSV with treatment and outcome")
      ->required();
  evl->add_option("--scores", evaluate.scores, "NAME=scores.csv (repeatable)")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  evl->add_option("--model", evaluate.models,
                  "NAME=model_dir for accuracy and ECE of the named scores (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  evl->add_option("--assignment", evaluate.assignments,
                  "NAME=assignment.csv to value against --truth (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  evl->add_option("--truth", evaluate.truth, "Ground-truth CSV from simulate");
  evl->add_option("--out", evaluate.out, "Report directory")->required();
  evl->add_option("--top-fraction", evaluate.top_fraction, "Cutoff for policy value")
      ->capture_default_str();
  evl->add_option("--n-bins", evaluate.n_bins, "Uplift-curve bins")->capture_default_str();
  evl->add_option("--shuffles", evaluate.shuffles, "Random-score AUUC repetitions")
      ->capture_default_str();
  evl->add_option("--seed", evaluate.seed, "Random baseline seed")->capture_default_str();
  evaluate.columns.Register(evl);
  evl->add_option("--config", config_help);

  try {
    const std::vector<std::string> args = ExpandConfig(raw_args);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitValidation;
    }
    if (sim->parsed()) return Simulate(simulate, out);
    if (trn->parsed()) return Train(train, out);
    if (scr->parsed()) return Score(score, out);
    if (sel->parsed()) return Select(select, out);
    if (evl->parsed()) return Evaluate(evaluate, out);
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FitError& e) {
    err << "fit error: " << e.what() << "\n";
    return kExitFit;
  }
}

}  // namespace multiuplift::cli
