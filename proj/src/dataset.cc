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

#include "multiuplift/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "multiuplift/csv.h"
#include "multiuplift/random.h"

namespace multiuplift {

CampaignDataset::CampaignDataset(std::vector<std::string> customer_ids,
                                 std::vector<std::string> feature_names,
                                 Matrix features, std::vector<int> treatments,
                                 std::vector<double> outcomes)
    : customer_ids_(std::move(customer_ids)),
      feature_names_(std::move(feature_names)),
      features_(std::move(features)),
      treatments_(std::move(treatments)),
      outcomes_(std::move(outcomes)) {
  const std::size_t n = customer_ids_.size();
  if (n == 0) throw ValidationError("dataset must contain at least one row");
  if (treatments_.size() != n || outcomes_.size() != n ||
      static_cast<std::size_t>(features_.rows()) != n) {
    throw ValidationError("dataset columns have inconsistent lengths");
  }
  if (static_cast<std::size_t>(features_.cols()) != feature_names_.size()) {
    throw ValidationError("feature matrix width does not match feature names");
  }
  std::unordered_set<std::string> seen;
  seen.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.insert(customer_ids_[i]).second) {
      throw ValidationError("duplicate customer_id '" + customer_ids_[i] +
                            "' at row " + std::to_string(i + 1));
    }
    if (treatments_[i] < 0) {
      throw ValidationError("negative treatment label at row " + std::to_string(i + 1));
    }
    if (!std::isfinite(outcomes_[i])) {
      throw ValidationError("non-finite outcome at row " + std::to_string(i + 1));
    }
    for (Eigen::Index j = 0; j < features_.cols(); ++j) {
      if (!std::isfinite(features_(i, j))) {
        throw ValidationError("non-finite value at row " + std::to_string(i + 1) +
                              ", column '" + feature_names_[j] + "'");
      }
    }
  }
  if (std::find(treatments_.begin(), treatments_.end(), 0) == treatments_.end()) {
    throw MissingControlError("dataset has no control rows (treatment 0)");
  }
}

std::vector<int> CampaignDataset::TreatmentLabels() const {
  std::set<int> labels(treatments_.begin(), treatments_.end());
  labels.erase(0);
  return {labels.begin(), labels.end()};
}

int CampaignDataset::MaxTreatment() const {
  return *std::max_element(treatments_.begin(), treatments_.end());
}

std::size_t CampaignDataset::CountLabel(int label) const {
  return static_cast<std::size_t>(
      std::count(treatments_.begin(), treatments_.end(), label));
}

bool CampaignDataset::HasBinaryOutcomes() const {
  return std::all_of(outcomes_.begin(), outcomes_.end(),
                     [](double y) { return y == 0.0 || y == 1.0; });
}

CampaignDataset CampaignDataset::Subset(std::span<const std::size_t> indices) const {
  std::vector<std::string> ids;
  std::vector<int> t;
  std::vector<double> y;
  Matrix x(static_cast<Eigen::Index>(indices.size()), features_.cols());
  ids.reserve(indices.size());
  t.reserve(indices.size());
  y.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t i = indices[r];
    ids.push_back(customer_ids_[i]);
    t.push_back(treatments_[i]);
    y.push_back(outcomes_[i]);
    x.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(i));
  }
  return CampaignDataset(std::move(ids), feature_names_, std::move(x), std::move(t),
                         std::move(y));
}

namespace {

struct ParsedTable {
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<int> treatments;
  std::vector<double> outcomes;
};

// Parses ids and features, and treatment/outcome when `with_labels`.
// Without labels, treatment/outcome columns are skipped if present.
ParsedTable ParseTable(const std::filesystem::path& path, const ColumnNames& columns,
                       bool with_labels) {
  const csv::Table table = csv::Read(path);
  const std::string where = path.string() + ": ";

  int id_col = -1, treatment_col = -1, outcome_col = -1;
  std::vector<int> feature_cols;
  ParsedTable out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    const int ci = static_cast<int>(c);
    if (name == columns.id) {
      id_col = ci;
    } else if (name == columns.treatment) {
      treatment_col = ci;
    } else if (name == columns.outcome) {
      outcome_col = ci;
    } else {
      feature_cols.push_back(ci);
      out.feature_names.push_back(name);
    }
  }
  if (id_col < 0) throw ValidationError(where + "missing id column '" + columns.id + "'");
  if (with_labels && treatment_col < 0) {
    throw ValidationError(where + "missing treatment column '" + columns.treatment + "'");
  }
  if (with_labels && outcome_col < 0) {
    throw ValidationError(where + "missing outcome column '" + columns.outcome + "'");
  }
  if (table.rows.empty()) throw ValidationError(where + "no data rows");

  const std::size_t n = table.rows.size();
  out.ids.resize(n);
  if (with_labels) {
    out.treatments.resize(n);
    out.outcomes.resize(n);
  }
  out.features.resize(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(feature_cols.size()));
  std::unordered_set<std::string> seen;
  seen.reserve(n);

  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    const auto location = [&](int col) {
      return where + "row " + std::to_string(r + 1) + " (line " +
             std::to_string(table.lines[r]) + "), column '" + table.header[col] + "': ";
    };
    out.ids[r] = row[id_col];
    if (!seen.insert(out.ids[r]).second) {
      throw ValidationError(location(id_col) + "duplicate customer_id '" + out.ids[r] + "'");
    }
    if (with_labels) {
      long long label = 0;
      if (!csv::ParseInt(row[treatment_col], label) || label < 0 || label > 1'000'000) {
        throw ValidationError(location(treatment_col) +
                              "expected a non-negative integer, got '" +
                              row[treatment_col] + "'");
      }
      out.treatments[r] = static_cast<int>(label);
      double y = 0.0;
      if (!csv::ParseDouble(row[outcome_col], y) || !std::isfinite(y)) {
        throw ValidationError(location(outcome_col) + "expected a finite real, got '" +
                              row[outcome_col] + "'");
      }
      out.outcomes[r] = y;
    }
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      const int c = feature_cols[j];
      double v = 0.0;
      if (!csv::ParseDouble(row[c], v)) {
        throw ValidationError(location(c) + "non-numeric value '" + row[c] + "'");
      }
      if (!std::isfinite(v)) {
        throw ValidationError(location(c) + "non-finite value '" + row[c] + "'");
      }
      out.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return out;
}

}  // namespace

CampaignDataset LoadCsv(const std::filesystem::path& path, const ColumnNames& columns) {
  ParsedTable parsed = ParseTable(path, columns, /*with_labels=*/true);
  if (std::find(parsed.treatments.begin(), parsed.treatments.end(), 0) ==
      parsed.treatments.end()) {
    throw MissingControlError(path.string() + ": no control rows (treatment 0)");
  }
  return CampaignDataset(std::move(parsed.ids), std::move(parsed.feature_names),
                         std::move(parsed.features), std::move(parsed.treatments),
                         std::move(parsed.outcomes));
}

FeatureTable LoadFeatureCsv(const std::filesystem::path& path, const ColumnNames& columns) {
  ParsedTable parsed = ParseTable(path, columns, /*with_labels=*/false);
  return FeatureTable{std::move(parsed.ids), std::move(parsed.feature_names),
                      std::move(parsed.features)};
}

std::string ToCsv(const CampaignDataset& dataset, const ColumnNames& columns) {
  std::string out = csv::Escape(columns.id);
  for (const auto& name : dataset.feature_names()) out += "," + csv::Escape(name);
  out += "," + csv::Escape(columns.treatment) + "," + csv::Escape(columns.outcome) + "\n";
  const Matrix& x = dataset.features();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out += csv::Escape(dataset.customer_ids()[i]);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out += "," + csv::FormatDouble(x(static_cast<Eigen::Index>(i), j));
    }
    out += "," + std::to_string(dataset.treatments()[i]);
    out += "," + csv::FormatDouble(dataset.outcomes()[i]) + "\n";
  }
  return out;
}

void WriteCsv(const CampaignDataset& dataset, const std::filesystem::path& path,
              const ColumnNames& columns) {
  csv::WriteFileAtomic(path, ToCsv(dataset, columns));
}

DatasetSplit Split(const CampaignDataset& dataset, double validation_fraction,
                   std::uint64_t seed) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ValidationError("validation_fraction must lie in (0, 1)");
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    groups[dataset.treatments()[i]].push_back(i);
  }
  std::vector<std::size_t> train, validation;
  for (auto& [label, rows] : groups) {
    if (rows.size() < 2) {
      throw ValidationError("treatment group " + std::to_string(label) + " has " +
                            std::to_string(rows.size()) +
                            " row(s); at least 2 are needed to stratify");
    }
    Rng rng(StreamSeed(seed, "split", static_cast<std::uint64_t>(label)));
    rng.Shuffle(std::span<std::size_t>(rows));
    auto take = static_cast<std::size_t>(
        std::llround(validation_fraction * static_cast<double>(rows.size())));
    take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
    validation.insert(validation.end(), rows.begin(), rows.begin() + take);
    train.insert(train.end(), rows.begin() + take, rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return DatasetSplit{dataset.Subset(train), dataset.Subset(validation)};
}

CampaignDataset FilterOneVsControl(const CampaignDataset& dataset, int treatment) {
  if (treatment < 1) throw ValidationError("treatment label must be >= 1");
  std::vector<std::size_t> rows;
  bool present = false;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int t = dataset.treatments()[i];
    if (t == treatment) present = true;
    if (t == 0 || t == treatment) rows.push_back(i);
  }
  if (!present) {
    throw ValidationError("treatment " + std::to_string(treatment) +
                          " is not present in the dataset");
  }
  const CampaignDataset subset = dataset.Subset(rows);
  std::vector<int> labels = subset.treatments();
  for (int& t : labels) t = (t == treatment) ? 1 : 0;
  return CampaignDataset(subset.customer_ids(), subset.feature_names(), subset.features(),
                         std::move(labels), subset.outcomes());
}

}  // namespace multiuplift
