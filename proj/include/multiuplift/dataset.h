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

#ifndef MULTIUPLIFT_DATASET_H_
#define MULTIUPLIFT_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "multiuplift/common.h"

namespace multiuplift {

// Raised when a dataset has no control (label 0) rows.
class MissingControlError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Campaign observations: one row per customer, treatment label 0 is control.
// Immutable after construction; the constructor enforces every invariant.
class CampaignDataset {
 public:
  CampaignDataset(std::vector<std::string> customer_ids,
                  std::vector<std::string> feature_names, Matrix features,
                  std::vector<int> treatments, std::vector<double> outcomes);

  std::size_t size() const { return customer_ids_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }

  const std::vector<std::string>& customer_ids() const { return customer_ids_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const Matrix& features() const { return features_; }
  const std::vector<int>& treatments() const { return treatments_; }
  const std::vector<double>& outcomes() const { return outcomes_; }

  // Distinct non-control labels in ascending order.
  std::vector<int> TreatmentLabels() const;
  // Largest treatment label present (K).
  int MaxTreatment() const;
  std::size_t CountLabel(int label) const;
  // True when every outcome is exactly 0 or 1.
  bool HasBinaryOutcomes() const;

  // Rows at `indices`, in the given order.
  CampaignDataset Subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> customer_ids_;
  std::vector<std::string> feature_names_;
  Matrix features_;
  std::vector<int> treatments_;
  std::vector<double> outcomes_;
};

struct ColumnNames {
  std::string id = "customer_id";
  std::string treatment = "treatment";
  std::string outcome = "outcome";
};

// Every column other than id/treatment/outcome is a real-valued feature.
// Errors carry the offending row and column.
CampaignDataset LoadCsv(const std::filesystem::path& path,
                        const ColumnNames& columns = {});

// Customer features without labels, for scoring.
struct FeatureTable {
  std::vector<std::string> customer_ids;
  std::vector<std::string> feature_names;
  Matrix features;
};

// Like LoadCsv, but treatment/outcome columns are optional and ignored.
FeatureTable LoadFeatureCsv(const std::filesystem::path& path,
                            const ColumnNames& columns = {});

// Columns: id, features..., treatment, outcome. Reals use 17 significant
// digits so that LoadCsv(WriteCsv(d)) reproduces d exactly.
std::string ToCsv(const CampaignDataset& dataset, const ColumnNames& columns = {});
void WriteCsv(const CampaignDataset& dataset, const std::filesystem::path& path,
              const ColumnNames& columns = {});

struct DatasetSplit {
  CampaignDataset train;
  CampaignDataset validation;
};

// Stratified by treatment label. Each label group is shuffled with its own
// stream StreamSeed(seed, "split", label); the first
// round(validation_fraction * group size) rows (clamped to [1, size - 1])
// go to validation. Both halves keep input row order.
DatasetSplit Split(const CampaignDataset& dataset, double validation_fraction,
                   std::uint64_t seed);

// Rows with treatment in {0, t}; label t is remapped to 1.
CampaignDataset FilterOneVsControl(const CampaignDataset& dataset, int treatment);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_DATASET_H_
