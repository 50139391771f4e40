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

#include "multiuplift/model_io.h"

#include <sstream>
#include <vector>

#include "multiuplift/csv.h"

namespace multiuplift {
namespace {

constexpr const char* kIndicatorName = "__treatment__";

class Writer {
 public:
  void Line(const std::string& key, const std::vector<std::string>& values = {}) {
    out_ += key;
    for (const auto& v : values) out_ += "\t" + v;
    out_ += "\n";
  }
  void Numbers(const std::string& key, const std::vector<double>& values) {
    std::vector<std::string> text;
    text.reserve(values.size());
    for (const double v : values) text.push_back(csv::FormatDouble(v));
    Line(key, text);
  }
  std::string str() const { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& text) {
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::size_t start = 0;
      while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      lines_.push_back(std::move(fields));
    }
  }

  bool Done() const { return pos_ >= lines_.size(); }
  const std::vector<std::string>& Peek() const {
    if (Done()) Fail("unexpected end of document");
    return lines_[pos_];
  }
  // Next line, which must start with `key`; returns its values.
  std::vector<std::string> Expect(const std::string& key) {
    const auto& line = Peek();
    if (line[0] != key) Fail("expected '" + key + "', found '" + line[0] + "'");
    ++pos_;
    return {line.begin() + 1, line.end()};
  }
  std::string ExpectOne(const std::string& key) {
    auto values = Expect(key);
    if (values.size() != 1) Fail("'" + key + "' takes exactly one value");
    return values[0];
  }
  std::vector<double> Numbers(const std::string& key) {
    std::vector<double> out;
    for (const auto& v : Expect(key)) out.push_back(Number(v));
    return out;
  }
  double Number(const std::string& text) const {
    double v = 0.0;
    if (!csv::ParseDouble(text, v)) Fail("bad number '" + text + "'");
    return v;
  }
  [[noreturn]] void Fail(const std::string& message) const {
    throw ValidationError("model document line " + std::to_string(pos_ + 1) + ": " +
                          message);
  }

 private:
  std::vector<std::vector<std::string>> lines_;
  std::size_t pos_ = 0;
};

std::vector<double> ToStd(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void WriteLinear(Writer& w, const std::string& name, const LinearModel& model,
                 const std::vector<std::string>& features) {
  w.Line("begin", {name});
  w.Line("kind", {model.kind == LinearKind::kLogistic ? "logistic" : "ridge"});
  w.Line("features", features);
  w.Numbers("intercept", {model.intercept});
  w.Numbers("weights", ToStd(model.weights));
  w.Line("end", {name});
}

LinearModel ReadLinearBody(Reader& r, const std::string& kind,
                           const std::vector<std::string>& expected_features) {
  LinearModel model;
  if (kind == "logistic") {
    model.kind = LinearKind::kLogistic;
  } else if (kind == "ridge") {
    model.kind = LinearKind::kRidge;
  } else {
    r.Fail("unknown linear model kind '" + kind + "'");
  }
  const auto features = r.Expect("features");
  if (features != expected_features) r.Fail("feature names do not match the model header");
  model.intercept = r.Number(r.ExpectOne("intercept"));
  const auto weights = r.Numbers("weights");
  if (weights.size() != features.size()) r.Fail("weight count does not match features");
  model.weights = Eigen::Map<const Vector>(weights.data(),
                                           static_cast<Eigen::Index>(weights.size()));
  return model;
}

LinearModel ReadLinear(Reader& r, const std::string& name,
                       const std::vector<std::string>& features) {
  if (r.ExpectOne("begin") != name) r.Fail("expected section '" + name + "'");
  LinearModel model = ReadLinearBody(r, r.ExpectOne("kind"), features);
  if (r.ExpectOne("end") != name) r.Fail("unterminated section '" + name + "'");
  return model;
}

void WriteOutcome(Writer& w, const std::string& name, const OutcomeModel& model,
                  const std::vector<std::string>& features) {
  if (const auto* linear = std::get_if<LinearModel>(&model)) {
    WriteLinear(w, name, *linear, features);
    return;
  }
  const auto& calibrated = std::get<CalibratedLearner>(model);
  w.Line("begin", {name});
  w.Line("kind", {"calibrated"});
  w.Line("folds", {std::to_string(calibrated.k())});
  for (int f = 0; f < calibrated.k(); ++f) {
    const auto& fold = calibrated.folds[static_cast<std::size_t>(f)];
    WriteLinear(w, "fold" + std::to_string(f), fold.base, features);
    w.Numbers("isotonic_x", fold.calibrator.knots_x);
    w.Numbers("isotonic_y", fold.calibrator.knots_y);
  }
  w.Line("end", {name});
}

OutcomeModel ReadOutcome(Reader& r, const std::string& name,
                         const std::vector<std::string>& features) {
  if (r.ExpectOne("begin") != name) r.Fail("expected section '" + name + "'");
  const std::string kind = r.ExpectOne("kind");
  OutcomeModel out;
  if (kind == "calibrated") {
    const double folds = r.Number(r.ExpectOne("folds"));
    if (folds < 2 || folds != static_cast<int>(folds)) r.Fail("bad fold count");
    CalibratedLearner learner;
    for (int f = 0; f < static_cast<int>(folds); ++f) {
      CalibratedFold fold;
      fold.base = ReadLinear(r, "fold" + std::to_string(f), features);
      fold.calibrator.knots_x = r.Numbers("isotonic_x");
      fold.calibrator.knots_y = r.Numbers("isotonic_y");
      const auto& kx = fold.calibrator.knots_x;
      const auto& ky = fold.calibrator.knots_y;
      if (kx.empty() || kx.size() != ky.size()) r.Fail("bad isotonic knots");
      for (std::size_t j = 1; j < kx.size(); ++j) {
        if (!(kx[j] > kx[j - 1]) || ky[j] < ky[j - 1]) r.Fail("isotonic knots not monotone");
      }
      learner.folds.push_back(std::move(fold));
    }
    out = std::move(learner);
  } else {
    out = ReadLinearBody(r, kind, features);
  }
  if (r.ExpectOne("end") != name) r.Fail("unterminated section '" + name + "'");
  return out;
}

std::string ReadText(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("missing model file '" + path.string() + "'");
  }
  return csv::ReadFile(path);
}

}  // namespace

std::string SerializeMetaModel(const FittedMetaModel& model) {
  model.Validate();
  Writer w;
  w.Line("multiuplift-model", {std::to_string(kModelFormatVersion)});
  w.Line("learner", {MetaKindName(model.kind)});
  w.Line("binary_outcome", {model.binary_outcome ? "true" : "false"});
  w.Line("features", model.feature_names);
  if (model.kind == MetaKind::kS) {
    auto augmented = model.feature_names;
    augmented.push_back(kIndicatorName);
    WriteOutcome(w, "s_model", *model.s_model, augmented);
  } else {
    WriteOutcome(w, "mu0", *model.mu0, model.feature_names);
    WriteOutcome(w, "mu1", *model.mu1, model.feature_names);
  }
  if (model.kind == MetaKind::kX) {
    WriteLinear(w, "tau0", *model.tau0, model.feature_names);
    WriteLinear(w, "tau1", *model.tau1, model.feature_names);
    WriteLinear(w, "propensity", *model.propensity, model.feature_names);
  }
  return w.str();
}

FittedMetaModel ParseMetaModel(const std::string& text) {
  Reader r(text);
  if (r.ExpectOne("multiuplift-model") != std::to_string(kModelFormatVersion)) {
    r.Fail("unsupported model format version");
  }
  FittedMetaModel model;
  model.kind = ParseMetaKind(r.ExpectOne("learner"));
  const std::string binary = r.ExpectOne("binary_outcome");
  if (binary != "true" && binary != "false") r.Fail("binary_outcome must be true/false");
  model.binary_outcome = binary == "true";
  model.feature_names = r.Expect("features");
  if (model.kind == MetaKind::kS) {
    auto augmented = model.feature_names;
    augmented.push_back(kIndicatorName);
    model.s_model = ReadOutcome(r, "s_model", augmented);
  } else {
    model.mu0 = ReadOutcome(r, "mu0", model.feature_names);
    model.mu1 = ReadOutcome(r, "mu1", model.feature_names);
  }
  if (model.kind == MetaKind::kX) {
    model.tau0 = ReadLinear(r, "tau0", model.feature_names);
    model.tau1 = ReadLinear(r, "tau1", model.feature_names);
    model.propensity = ReadLinear(r, "propensity", model.feature_names);
  }
  if (!r.Done()) r.Fail("trailing content");
  model.Validate();
  return model;
}

std::string SerializeManifest(const MultiTreatmentModel& model) {
  Writer w;
  w.Line("multiuplift-manifest", {std::to_string(kModelFormatVersion)});
  w.Line("learner", {MetaKindName(model.kind)});
  w.Line("calibrated", {model.calibrated ? "true" : "false"});
  std::vector<std::string> labels;
  for (const int t : model.labels()) labels.push_back(std::to_string(t));
  w.Line("treatments", labels);
  w.Line("features", model.feature_names);
  return w.str();
}

void SaveModelDirectory(const MultiTreatmentModel& model, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  // Serialise everything before touching the filesystem.
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("manifest.txt", SerializeManifest(model));
  for (const auto& [label, sub] : model.per_treatment) {
    files.emplace_back("treatment_" + std::to_string(label) + ".model",
                       SerializeMetaModel(sub));
  }
  fs::path target = dir;
  if (target.filename().empty()) target = target.parent_path();
  fs::path tmp = target;
  tmp += ".tmp";
  std::error_code ec;
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp, ec);
  if (ec) {
    throw IoError("cannot create model directory '" + tmp.string() + "': " + ec.message());
  }
  try {
    for (const auto& [name, content] : files) csv::WriteFileAtomic(tmp / name, content);
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
  fs::remove_all(target, ec);
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove_all(tmp, ec);
    throw IoError("cannot move model directory into '" + target.string() + "'");
  }
}

MultiTreatmentModel LoadModelDirectory(const std::filesystem::path& dir) {
  Reader r(ReadText(dir / "manifest.txt"));
  if (r.ExpectOne("multiuplift-manifest") != std::to_string(kModelFormatVersion)) {
    r.Fail("unsupported manifest version");
  }
  MultiTreatmentModel model;
  model.kind = ParseMetaKind(r.ExpectOne("learner"));
  const std::string calibrated = r.ExpectOne("calibrated");
  if (calibrated != "true" && calibrated != "false") r.Fail("calibrated must be true/false");
  model.calibrated = calibrated == "true";
  const auto labels = r.Expect("treatments");
  model.feature_names = r.Expect("features");
  if (labels.empty()) r.Fail("manifest lists no treatments");
  for (const auto& text : labels) {
    const double label = r.Number(text);
    if (label < 1 || label != static_cast<int>(label)) r.Fail("bad treatment label");
    const auto t = static_cast<int>(label);
    FittedMetaModel sub =
        ParseMetaModel(ReadText(dir / ("treatment_" + std::to_string(t) + ".model")));
    if (sub.kind != model.kind || sub.feature_names != model.feature_names) {
      throw ValidationError("treatment " + std::to_string(t) +
                            " model does not match the manifest");
    }
    model.per_treatment.emplace(t, std::move(sub));
  }
  return model;
}

}  // namespace multiuplift
