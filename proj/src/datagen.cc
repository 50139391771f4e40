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

#include "multiuplift/datagen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "multiuplift/csv.h"
#include "multiuplift/kernels.h"
#include "multiuplift/random.h"

namespace multiuplift {
namespace {

std::vector<std::string> SplitOn(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double Number(const std::string& text, const std::string& spec) {
  double v = 0.0;
  if (!csv::ParseDouble(text, v) || !std::isfinite(v)) {
    throw ValidationError("bad number '" + text + "' in tau spec '" + spec + "'");
  }
  return v;
}

int Index(const std::string& text, const std::string& spec) {
  long long v = 0;
  if (!csv::ParseInt(text, v) || v < 0) {
    throw ValidationError("bad feature index '" + text + "' in tau spec '" + spec + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

TauSpec TauSpec::Constant(double c) {
  TauSpec s;
  s.kind = Kind::kConstant;
  s.offset = c;
  return s;
}

TauSpec TauSpec::Linear(double intercept, std::vector<double> weights) {
  TauSpec s;
  s.kind = Kind::kLinear;
  s.offset = intercept;
  s.weights = std::move(weights);
  return s;
}

TauSpec TauSpec::ClippedLinear(double intercept, std::vector<double> weights, double lo,
                               double hi) {
  TauSpec s = Linear(intercept, std::move(weights));
  s.clipped = true;
  s.low = lo;
  s.high = hi;
  return s;
}

TauSpec TauSpec::Step(int feature, double threshold, double low, double high) {
  TauSpec s;
  s.kind = Kind::kStep;
  s.feature = feature;
  s.threshold = threshold;
  s.low = low;
  s.high = high;
  return s;
}

TauSpec TauSpec::Logistic(int feature, double offset, double amplitude, double slope) {
  TauSpec s;
  s.kind = Kind::kLogistic;
  s.feature = feature;
  s.offset = offset;
  s.amplitude = amplitude;
  s.slope = slope;
  return s;
}

TauSpec TauSpec::Parse(const std::string& text) {
  const auto parts = SplitOn(text, ':');
  if (parts.empty()) throw ValidationError("empty tau spec");
  const std::string& kind = parts[0];
  if (kind == "constant" && parts.size() == 2) return Constant(Number(parts[1], text));
  if (kind == "linear" && (parts.size() == 3 || parts.size() == 5)) {
    std::vector<double> weights;
    for (const auto& w : SplitOn(parts[2], ',')) weights.push_back(Number(w, text));
    if (parts.size() == 5) {
      return ClippedLinear(Number(parts[1], text), std::move(weights),
                           Number(parts[3], text), Number(parts[4], text));
    }
    return Linear(Number(parts[1], text), std::move(weights));
  }
  if (kind == "step" && parts.size() == 5) {
    return Step(Index(parts[1], text), Number(parts[2], text), Number(parts[3], text),
                Number(parts[4], text));
  }
  if (kind == "logistic" && parts.size() == 5) {
    return Logistic(Index(parts[1], text), Number(parts[2], text), Number(parts[3], text),
                    Number(parts[4], text));
  }
  throw ValidationError("unrecognised tau spec '" + text + "'");
}

double TauSpec::Evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  switch (kind) {
    case Kind::kConstant:
      return offset;
    case Kind::kLinear: {
      double v = offset;
      for (std::size_t j = 0; j < weights.size(); ++j) {
        v += weights[j] * row(static_cast<Eigen::Index>(j));
      }
      return clipped ? std::clamp(v, low, high) : v;
    }
    case Kind::kStep:
      return row(feature) > threshold ? high : low;
    case Kind::kLogistic:
      return offset + amplitude * kernels::Sigmoid(slope * row(feature));
  }
  return 0.0;
}

int TauSpec::MaxFeature() const {
  switch (kind) {
    case Kind::kConstant:
      return -1;
    case Kind::kLinear:
      return static_cast<int>(weights.size()) - 1;
    case Kind::kStep:
    case Kind::kLogistic:
      return feature;
  }
  return -1;
}

void GeneratorConfig::Validate() const {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (tau_specs.empty()) throw ValidationError("at least one treatment is required");
  if (assignment_probs.size() != tau_specs.size() + 1) {
    throw ValidationError("probs must have K + 1 = " + std::to_string(tau_specs.size() + 1) +
                          " entries, got " + std::to_string(assignment_probs.size()));
  }
  double sum = 0.0;
  for (const double p : assignment_probs) {
    if (!(p > 0.0)) throw ValidationError("probs must all be > 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("probs must sum to 1, got " + csv::FormatDouble(sum));
  }
  if (base_weights.size() != d) {
    throw ValidationError("base weights must have d = " + std::to_string(d) + " entries");
  }
  for (std::size_t t = 0; t < tau_specs.size(); ++t) {
    if (tau_specs[t].MaxFeature() >= static_cast<int>(d)) {
      throw ValidationError("tau spec for treatment " + std::to_string(t + 1) +
                            " references a feature beyond d = " + std::to_string(d));
    }
  }
}

SimulatedCampaign Generate(const GeneratorConfig& config) {
  config.Validate();
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto d = static_cast<Eigen::Index>(config.d);
  const auto k = static_cast<Eigen::Index>(config.num_treatments());

  Matrix x(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Rng rng(StreamSeed(config.seed, "feature", static_cast<std::uint64_t>(j)));
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.Normal();
  }

  std::vector<double> cumulative(config.assignment_probs.size());
  std::partial_sum(config.assignment_probs.begin(), config.assignment_probs.end(),
                   cumulative.begin());
  Rng treatment_rng(StreamSeed(config.seed, "treatment"));
  std::vector<int> treatments(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double u = treatment_rng.Uniform01();
    int label = 0;
    while (label + 1 < static_cast<int>(cumulative.size()) && u >= cumulative[label]) ++label;
    treatments[i] = label;
  }

  const Vector base_w = Eigen::Map<const Vector>(config.base_weights.data(), d);
  GroundTruth truth{Matrix(n, k), std::vector<double>(config.n)};
  Rng outcome_rng(StreamSeed(config.seed, "outcome"));
  std::vector<double> outcomes(config.n);
  std::vector<std::string> ids(config.n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double base = std::clamp(kernels::Sigmoid(config.base_intercept + x.row(i).dot(base_w)),
                                   kProbClipLow, kProbClipHigh);
    truth.base_prob[ui] = base;
    for (Eigen::Index t = 0; t < k; ++t) {
      const double raw = config.tau_specs[static_cast<std::size_t>(t)].Evaluate(x.row(i));
      truth.tau(i, t) = std::clamp(base + raw, kProbClipLow, kProbClipHigh) - base;
    }
    const int label = treatments[ui];
    const double p = label == 0 ? base : base + truth.tau(i, label - 1);
    outcomes[ui] = outcome_rng.Bernoulli(p) ? 1.0 : 0.0;
    ids[ui] = "c" + std::to_string(i + 1);
  }

  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
  return SimulatedCampaign{
      CampaignDataset(std::move(ids), std::move(names), std::move(x), std::move(treatments),
                      std::move(outcomes)),
      std::move(truth)};
}

GeneratorConfig DefaultCampaignConfig(std::uint64_t seed) {
  GeneratorConfig config;
  config.n = 20000;
  config.d = 5;
  config.assignment_probs = {0.4, 0.3, 0.3};
  // Baseline conversion around 5%, typical of retail offer campaigns.
  config.base_intercept = -3.0;
  config.base_weights = {0.1, -0.1, 0.2, -0.15, 0.1};
  config.tau_specs = {TauSpec::Logistic(0, 0.05, 0.10, 2.0),
                      TauSpec::ClippedLinear(0.08, {0.0, 0.02}, 0.0, 0.16)};
  config.seed = seed;
  return config;
}

SimulatedCampaign DefaultCampaign(std::uint64_t seed) {
  return Generate(DefaultCampaignConfig(seed));
}

std::string GroundTruthToCsv(const std::vector<std::string>& customer_ids,
                             const GroundTruth& truth) {
  if (customer_ids.size() != truth.base_prob.size() ||
      static_cast<std::size_t>(truth.tau.rows()) != customer_ids.size()) {
    throw ValidationError("ground truth does not match customer ids");
  }
  std::string out = "customer_id";
  for (Eigen::Index t = 0; t < truth.tau.cols(); ++t) {
    out += ",true_tau_" + std::to_string(t + 1);
  }
  out += ",base_prob\n";
  for (std::size_t i = 0; i < customer_ids.size(); ++i) {
    out += csv::Escape(customer_ids[i]);
    for (Eigen::Index t = 0; t < truth.tau.cols(); ++t) {
      out += "," + csv::FormatDouble(truth.tau(static_cast<Eigen::Index>(i), t));
    }
    out += "," + csv::FormatDouble(truth.base_prob[i]) + "\n";
  }
  return out;
}

LoadedGroundTruth ReadGroundTruthCsv(const std::filesystem::path& path) {
  const csv::Table table = csv::Read(path);
  const auto& header = table.header;
  if (header.size() < 3 || header.front() != "customer_id" || header.back() != "base_prob") {
    throw ValidationError(path.string() +
                          ": expected header customer_id,true_tau_<t>,...,base_prob");
  }
  LoadedGroundTruth out;
  for (std::size_t c = 1; c + 1 < header.size(); ++c) {
    long long label = 0;
    if (header[c].rfind("true_tau_", 0) != 0 || !csv::ParseInt(header[c].substr(9), label)) {
      throw ValidationError(path.string() + ": bad column '" + header[c] + "'");
    }
    out.labels.push_back(static_cast<int>(label));
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto k = static_cast<Eigen::Index>(out.labels.size());
  out.truth.tau.resize(n, k);
  out.truth.base_prob.resize(table.rows.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    out.customer_ids.push_back(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      double v = 0.0;
      if (!csv::ParseDouble(row[c], v)) {
        throw ValidationError(path.string() + ": row " + std::to_string(i + 1) +
                              ", column '" + header[c] + "': bad number");
      }
      if (c + 1 == row.size()) {
        out.truth.base_prob[static_cast<std::size_t>(i)] = v;
      } else {
        out.truth.tau(i, static_cast<Eigen::Index>(c - 1)) = v;
      }
    }
  }
  return out;
}

}  // namespace multiuplift
