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

#ifndef MULTIUPLIFT_SELECTION_H_
#define MULTIUPLIFT_SELECTION_H_

#include <filesystem>
#include <string>
#include <vector>

#include "multiuplift/common.h"

namespace multiuplift {

// Estimated CATE per customer (rows) and treatment (columns).
struct UpliftScores {
  std::vector<std::string> customer_ids;
  // Ascending, unique, all >= 1. Column j holds treatment_labels[j].
  std::vector<int> treatment_labels;
  Matrix scores;

  std::size_t size() const { return customer_ids.size(); }
  // Throws ValidationError on shape, label or finiteness violations.
  void Validate() const;
  Eigen::Index ColumnOf(int label) const;
};

inline constexpr int kNoTreatment = -1;

struct Assignment {
  std::vector<std::string> customer_ids;
  // Treatment label or kNoTreatment.
  std::vector<int> assigned;
  // Raw CATE of the assigned treatment.
  std::vector<double> deciding_score;
  // Rank (direct ranking) or z-score (standardisation) that won.
  std::vector<double> deciding_stat;

  std::size_t size() const { return customer_ids.size(); }
  std::size_t CountAssigned() const;
};

// Ranks each column by descending score (rank 1 is best, ties go to the
// earlier row) and gives each customer the treatment where their rank is
// smallest; equal ranks resolve to the smallest label.
Assignment DirectRankAssign(const UpliftScores& scores);

// Per column (s - mean) / std with the population std. Columns whose std is
// below 1e-12 become all zeros. Needs n >= 2.
UpliftScores ZScoreStandardize(const UpliftScores& scores);

// Argmax of the standardised row; ties resolve to the smallest label.
Assignment ZScoreAssign(const UpliftScores& scores);

// Keeps the ceil(top_fraction * n) customers with the highest raw CATE for
// their assigned treatment (ties keep the earlier row); the rest become
// kNoTreatment.
Assignment ApplyCutoff(const Assignment& assignment, const UpliftScores& scores,
                       double top_fraction);

// customer_id,cate_<label>,... with labels ascending.
std::string ScoresToCsv(const UpliftScores& scores);
UpliftScores ReadScoresCsv(const std::filesystem::path& path);

// customer_id,assigned_treatment,deciding_score,deciding_stat with
// kNoTreatment written as -1.
std::string AssignmentToCsv(const Assignment& assignment);
Assignment ReadAssignmentCsv(const std::filesystem::path& path);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_SELECTION_H_
