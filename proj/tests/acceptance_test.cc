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

// Acceptance suite: runs each acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits non-zero on any FAIL.
//
// Usage: acceptance_test [path/to/multiuplift_tests]
// The optional argument is the unit-test binary, timed for the wall-clock
// criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "multiuplift/calibrate.h"
#include "multiuplift/cli.h"
#include "multiuplift/datagen.h"
#include "multiuplift/evaluate.h"
#include "multiuplift/kernels.h"
#include "multiuplift/metalearn.h"
#include "multiuplift/random.h"
#include "multiuplift/selection.h"
#include "test_util.h"

namespace multiuplift {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// --- 1: PAVA ----------------------------------------------------------------

// Best non-decreasing fit among all contiguous block partitions.
std::vector<double> LevelSetMinimizer(const std::vector<double>& v) {
  const std::size_t m = v.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_fit;
  for (unsigned mask = 0; mask < (1u << (m - 1)); ++mask) {
    std::vector<double> fit(m);
    double prev = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    std::size_t start = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i + 1 != m && !((mask >> i) & 1u)) continue;
      const double level =
          std::accumulate(v.begin() + static_cast<long>(start), v.begin() + static_cast<long>(i) + 1,
                          0.0) /
          static_cast<double>(i + 1 - start);
      monotone = monotone && level >= prev;
      prev = level;
      std::fill(fit.begin() + static_cast<long>(start), fit.begin() + static_cast<long>(i) + 1,
                level);
      start = i + 1;
    }
    if (!monotone) continue;
    double sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) sse += (fit[i] - v[i]) * (fit[i] - v[i]);
    if (sse < best) best = sse, best_fit = fit;
  }
  return best_fit;
}

Outcome PavaOracle() {
  const auto start = Clock::now();
  std::size_t checked = 0;
  double worst = 0.0;
  for (std::size_t m = 1; m <= 6; ++m) {
    const std::size_t total = std::size_t{1} << (2 * m);
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<double> v(m);
      std::size_t c = code;
      for (std::size_t i = 0; i < m; ++i, c /= 4) v[i] = static_cast<double>(c % 4);
      const auto got = Pava(v, std::vector<double>(m, 1.0));
      const auto want = LevelSetMinimizer(v);
      for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
      ++checked;
    }
  }
  const double elapsed = Seconds(start);
  return {worst <= 1e-9 && elapsed < 10.0,
          std::to_string(checked) + " sequences, max abs diff " + Fmt(worst) + ", " +
              Fmt(elapsed) + " s"};
}

// --- 2: gradient check --------------------------------------------------------

Outcome GradientCheck() {
  const auto start = Clock::now();
  Rng rng(StreamSeed(kSeed, "acceptance-gradient"));
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng.UniformIndex(50));
    const auto d = static_cast<Eigen::Index>(1 + rng.UniformIndex(5));
    Matrix x(n, d);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.Normal();
      y[static_cast<std::size_t>(i)] = rng.Bernoulli(0.5) ? 1.0 : 0.0;
    }
    Vector w(d), penalty(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      w(j) = rng.Normal();
      penalty(j) = rng.Uniform01();
    }
    const double b = rng.Normal();
    const auto loss = [&](const Vector& wv, double bv) {
      return kernels::parallel::LogisticLossGradient(x, y, wv, bv, penalty).loss;
    };
    const auto obj = kernels::parallel::LogisticLossGradient(x, y, w, b, penalty);
    Vector analytic(d + 1), numeric(d + 1);
    analytic << obj.grad_weights, obj.grad_intercept;
    for (Eigen::Index j = 0; j < d; ++j) {
      Vector wp = w, wm = w;
      wp(j) += h;
      wm(j) -= h;
      numeric(j) = (loss(wp, b) - loss(wm, b)) / (2.0 * h);
    }
    numeric(d) = (loss(w, b + h) - loss(w, b - h)) / (2.0 * h);
    worst = std::max(worst, (analytic - numeric).norm() / std::max(analytic.norm(), 1e-12));
  }
  const double elapsed = Seconds(start);
  return {worst <= 1e-6 && elapsed < 5.0,
          "100 instances, max relative error " + Fmt(worst) + ", " + Fmt(elapsed) + " s"};
}

// --- 3: meta-learner recovery -------------------------------------------------

CampaignDataset UninformativeRct(double tau, std::uint64_t seed) {
  GeneratorConfig config;
  config.n = 2000;
  config.d = 3;
  config.base_weights = {0.0, 0.0, 0.0};
  config.base_intercept = std::log(0.1 / 0.9);
  config.tau_specs = {TauSpec::Constant(tau)};
  config.seed = seed;
  return Generate(config).data;
}

Outcome MetaLearnerRecovery() {
  const auto start = Clock::now();
  const CampaignDataset effect = UninformativeRct(0.20, StreamSeed(kSeed, "recovery"));
  const CampaignDataset null = UninformativeRct(0.0, StreamSeed(kSeed, "recovery-null"));
  bool pass = true;
  std::string detail;
  for (const MetaKind kind : {MetaKind::kS, MetaKind::kT, MetaKind::kX}) {
    const double with_effect =
        Mean(PredictCate(FitMeta(kind, effect, MetaFitOptions{}), effect.features()));
    const double without =
        Mean(PredictCate(FitMeta(kind, null, MetaFitOptions{}), null.features()));
    pass = pass && std::abs(with_effect - 0.20) <= 0.02 && std::abs(without) < 0.02;
    detail += std::string(MetaKindName(kind)) + ": " + Fmt(with_effect) + " / " +
              Fmt(without) + "; ";
  }
  const double elapsed = Seconds(start);
  return {pass && elapsed < 30.0, detail + Fmt(elapsed) + " s"};
}

// --- 4: X-learner boundary identities -----------------------------------------

Outcome BoundaryIdentities() {
  GeneratorConfig config = DefaultCampaignConfig(StreamSeed(kSeed, "boundary"));
  config.n = 4000;
  config.assignment_probs = {0.5, 0.5};
  config.tau_specs.resize(1);
  const CampaignDataset data = Generate(config).data;
  const FittedMetaModel x_model = FitX(data, MetaFitOptions{});
  const Matrix& x = data.features();
  const auto g0 = PredictCate(x_model, x, PredictOptions{0.0});
  const auto g1 = PredictCate(x_model, x, PredictOptions{1.0});
  const auto tau1 = Predict(*x_model.tau1, x);
  const auto tau0 = Predict(*x_model.tau0, x);
  double worst = 0.0;
  for (std::size_t i = 0; i < g0.size(); ++i) {
    worst = std::max(worst, std::abs(g0[i] - std::clamp(tau1[i], -1.0, 1.0)));
    worst = std::max(worst, std::abs(g1[i] - std::clamp(tau0[i], -1.0, 1.0)));
  }
  return {worst <= 1e-12, std::to_string(g0.size()) + " rows, max abs diff " + Fmt(worst)};
}

// --- 5: ranking quality -------------------------------------------------------

struct ArmSlice {
  std::vector<double> score;
  std::vector<int> treatment;
  std::vector<double> outcome;
};

ArmSlice OneVsControl(const CampaignDataset& data, const Matrix& scores, int label) {
  ArmSlice s;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int t = data.treatments()[i];
    if (t != 0 && t != label) continue;
    s.score.push_back(scores(static_cast<Eigen::Index>(i), label - 1));
    s.treatment.push_back(t == label ? 1 : 0);
    s.outcome.push_back(data.outcomes()[i]);
  }
  return s;
}

Outcome RankingQuality() {
  const auto start = Clock::now();
  // Fit on one draw of the default campaign, score an independent draw.
  const SimulatedCampaign train = DefaultCampaign(kSeed);
  const SimulatedCampaign test = DefaultCampaign(kSeed + 1);
  const MultiTreatmentModel model =
      FitMultiTreatment(train.data, MetaKind::kT, MetaFitOptions{});
  const Matrix uplift = PredictUpliftMatrix(model, test.data.features());
  bool pass = true;
  std::string detail;
  for (const int label : {1, 2}) {
    const ArmSlice s = OneVsControl(test.data, uplift, label);
    const double auuc = Auuc(ComputeUpliftCurve(s.score, s.treatment, s.outcome));
    const RandomBaseline baseline =
        AuucRandomBaseline(s.treatment, s.outcome, 200, StreamSeed(kSeed, "ranking", label));
    std::vector<double> predicted(uplift.col(label - 1).data(),
                                  uplift.col(label - 1).data() + uplift.rows());
    std::vector<double> truth(test.truth.tau.col(label - 1).data(),
                              test.truth.tau.col(label - 1).data() + uplift.rows());
    const double rho = SpearmanCorrelation(predicted, truth);
    pass = pass && auuc > baseline.p95 && rho >= 0.5;
    detail += "t" + std::to_string(label) + ": auuc " + Fmt(auuc) + " vs p95 " +
              Fmt(baseline.p95) + ", spearman " + Fmt(rho) + "; ";
  }
  const double elapsed = Seconds(start);
  return {pass && elapsed < 120.0, detail + Fmt(elapsed) + " s"};
}

// --- 6: calibration direction -------------------------------------------------

struct CalibrationRun {
  double ece = 0.0;
  double auuc = 0.0;
};

CalibrationRun RunCalibration(MetaKind kind, bool calibrated, const DatasetSplit& split) {
  MetaFitOptions options;
  options.fit.l2 = 10.0;
  options.calibrated = calibrated;
  options.seed = StreamSeed(kSeed, "calibration-folds");
  const FittedMetaModel model = FitMeta(kind, split.train, options);
  const CampaignDataset& v = split.validation;
  const auto p0 = PredictArmOutcome(model, v.features(), 0);
  const auto p1 = PredictArmOutcome(model, v.features(), 1);
  std::vector<double> factual(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    factual[i] = v.treatments()[i] == 1 ? p1[i] : p0[i];
  }
  const auto cate = PredictCate(model, v.features());
  return {ExpectedCalibrationError(factual, v.outcomes(), 10),
          Auuc(ComputeUpliftCurve(cate, v.treatments(), v.outcomes()))};
}

Outcome CalibrationDirection() {
  GeneratorConfig config;
  config.n = 20000;
  config.d = 1;
  config.assignment_probs = {0.5, 0.5};
  config.base_weights = {3.0};
  config.base_intercept = 0.0;
  config.tau_specs = {TauSpec::Step(0, 0.0, 0.0, 0.2)};
  config.seed = StreamSeed(kSeed, "calibration");
  const DatasetSplit split = Split(Generate(config).data, 0.3, config.seed);
  const CalibrationRun t_raw = RunCalibration(MetaKind::kT, false, split);
  const CalibrationRun t_cal = RunCalibration(MetaKind::kT, true, split);
  const CalibrationRun x_raw = RunCalibration(MetaKind::kX, false, split);
  const CalibrationRun x_cal = RunCalibration(MetaKind::kX, true, split);
  return {t_cal.ece < t_raw.ece && t_cal.auuc >= t_raw.auuc - 1e-9,
          "T ece " + Fmt(t_cal.ece) + " (cal) vs " + Fmt(t_raw.ece) + ", T auuc " +
              Fmt(t_cal.auuc) + " vs " + Fmt(t_raw.auuc) + "; recorded X auuc " +
              Fmt(x_cal.auuc) + " (cal) vs " + Fmt(x_raw.auuc)};
}

// --- 7: selection direction ---------------------------------------------------

struct SelectionRun {
  double rank_value = 0.0;
  double z_value = 0.0;
  double differing = 0.0;
};

SelectionRun CompareSelection(const UpliftScores& scores, const Matrix& tau) {
  const std::vector<int> labels = {1, 2};
  const Assignment rank = ApplyCutoff(DirectRankAssign(scores), scores, 0.3);
  const Assignment z = ApplyCutoff(ZScoreAssign(scores), scores, 0.3);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < rank.size(); ++i) differ += rank.assigned[i] != z.assigned[i];
  return {PolicyValue(rank, tau, labels), PolicyValue(z, tau, labels),
          static_cast<double>(differ) / static_cast<double>(rank.size())};
}

Outcome SelectionDirection() {
  const auto start = Clock::now();
  const SimulatedCampaign campaign = DefaultCampaign(kSeed);
  // Both strategies applied to the generator's effect functions.
  const SelectionRun truth = CompareSelection(
      UpliftScores{campaign.data.customer_ids(), {1, 2}, campaign.truth.tau},
      campaign.truth.tau);
  // Learned T-learner scores, reported only.
  const MultiTreatmentModel model =
      FitMultiTreatment(campaign.data, MetaKind::kT, MetaFitOptions{});
  const SelectionRun learned = CompareSelection(
      UpliftScores{campaign.data.customer_ids(), {1, 2},
                   PredictUpliftMatrix(model, campaign.data.features())},
      campaign.truth.tau);
  const double elapsed = Seconds(start);
  return {truth.z_value >= truth.rank_value && truth.differing >= 0.01 && elapsed < 30.0,
          "true-effect scores: zscore " + Fmt(truth.z_value) + " vs rank " +
              Fmt(truth.rank_value) + ", differing " + Fmt(100 * truth.differing) +
              "%; recorded learned scores: zscore " + Fmt(learned.z_value) + " vs rank " +
              Fmt(learned.rank_value) + ", differing " + Fmt(100 * learned.differing) +
              "%; " + Fmt(elapsed) + " s"};
}

// --- 8: determinism -----------------------------------------------------------

bool RunPipeline(const fs::path& root, std::string& error) {
  const std::string r = root.string();
  const std::vector<std::vector<std::string>> steps = {
      {"simulate", "--seed", "7", "--out", r + "/sim"},
      {"train", "--data", r + "/sim/campaign.csv", "--learner", "X", "--calibrated", "--seed",
       "7", "--out", r + "/model"},
      {"score", "--data", r + "/sim/campaign.csv", "--model", r + "/model", "--out",
       r + "/scores.csv"},
      {"select", "--scores", r + "/scores.csv", "--top-fraction", "0.3", "--out",
       r + "/assignment.csv"},
      {"evaluate", "--data", r + "/sim/campaign.csv", "--scores", "X=" + r + "/scores.csv",
       "--model", "X=" + r + "/model", "--truth", r + "/sim/ground_truth.csv", "--assignment",
       "zscore30=" + r + "/assignment.csv", "--seed", "7", "--out", r + "/report"},
  };
  for (auto args : steps) {
    args.insert(args.begin(), "uplift");
    std::ostringstream out, err;
    if (cli::Run(args, out, err) != cli::kExitOk) {
      error = args[1] + ": " + err.str();
      return false;
    }
  }
  return true;
}

std::map<std::string, std::string> Tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] = testing::Slurp(entry.path());
    }
  }
  return files;
}

Outcome Determinism() {
  testing::ScratchDir a, b;
  std::string error;
  if (!RunPipeline(a.path(), error) || !RunPipeline(b.path(), error)) {
    return {false, "pipeline failed: " + error};
  }
  const auto first = Tree(a.path());
  const auto second = Tree(b.path());
  std::size_t bytes = 0;
  for (const auto& [name, content] : first) bytes += content.size();
  return {first == second, std::to_string(first.size()) + " files, " + std::to_string(bytes) +
                               " bytes compared"};
}

// --- 9: curve hand-check ------------------------------------------------------

Outcome CurveHandCheck() {
  const std::vector<double> score = {4, 3, 2, 1};
  const std::vector<int> treatment = {1, 0, 1, 0};
  const std::vector<double> outcome = {1, 0, 0, 0};
  const UpliftCurve curve = ComputeUpliftCurve(score, treatment, outcome, 2);
  const double auuc = Auuc(curve);
  const bool pass = curve.fractions == std::vector<double>{0.5, 1.0} &&
                    curve.cumulative_uplift == std::vector<double>{1.0, 0.5} && auuc == 0.625;
  return {pass, "fractions [" + Fmt(curve.fractions[0]) + ", " + Fmt(curve.fractions[1]) +
                    "], uplift [" + Fmt(curve.cumulative_uplift[0]) + ", " +
                    Fmt(curve.cumulative_uplift[1]) + "], auuc " + Fmt(auuc)};
}

// --- 10: wall clock -----------------------------------------------------------

Outcome WallClock(const char* unit_binary, double acceptance_seconds) {
  if (unit_binary == nullptr) return {false, "unit-test binary path not given"};
  const auto start = Clock::now();
  const std::string command = std::string("\"") + unit_binary + "\" > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  const double unit_seconds = Seconds(start);
  const double total = unit_seconds + acceptance_seconds;
  return {status == 0 && total < 300.0,
          "unit tests " + Fmt(unit_seconds) + " s (exit " + std::to_string(status) +
              ") + acceptance " + Fmt(acceptance_seconds) + " s = " + Fmt(total) + " s"};
}

int Main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"PAVA matches exhaustive level-set minimization", PavaOracle},
      {"logistic gradient matches central differences", GradientCheck},
      {"S/T/X recover ATE 0.20 and null effect", MetaLearnerRecovery},
      {"X-learner forced-g boundary identities", BoundaryIdentities},
      {"T-learner AUUC > random p95 and Spearman >= 0.5", RankingQuality},
      {"calibration lowers ECE without losing AUUC", CalibrationDirection},
      {"z-score policy value >= direct rank", SelectionDirection},
      {"pipeline output is bit-identical across runs", Determinism},
      {"4-row uplift curve hand-check", CurveHandCheck},
  };
  const auto start = Clock::now();
  int failures = 0;
  const auto report = [&](std::size_t id, const std::string& name, const Outcome& outcome) {
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": "
              << outcome.detail << std::endl;
    failures += outcome.pass ? 0 : 1;
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    report(i + 1, criteria[i].first, outcome);
  }
  report(10, "full test suite under 5 minutes",
         WallClock(argc > 1 ? argv[1] : nullptr, Seconds(start)));
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace multiuplift

int main(int argc, char** argv) { return multiuplift::Main(argc, argv); }
