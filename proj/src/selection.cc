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

#include "multiuplift/selection.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multiuplift/csv.h"

namespace multiuplift {
namespace {

constexpr double kStdFloor = 1e-12;

// Number of rows kept by a top-fraction cutoff. The epsilon absorbs
// representation error such as 0.3 * 20000 = 6000.000000000001.
std::size_t CutoffCount(double top_fraction, std::size_t n) {
  const double raw = top_fraction * static_cast<double>(n);
  const auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(count, n);
}

Assignment EmptyAssignment(const UpliftScores& scores) {
  Assignment out;
  out.customer_ids = scores.customer_ids;
  out.assigned.assign(scores.size(), kNoTreatment);
  out.deciding_score.assign(scores.size(), 0.0);
  out.deciding_stat.assign(scores.size(), 0.0);
  return out;
}

}  // namespace

void UpliftScores::Validate() const {
  if (customer_ids.empty()) throw ValidationError("scores have no rows");
  if (treatment_labels.empty()) throw ValidationError("scores have no treatment columns");
  if (static_cast<std::size_t>(scores.rows()) != customer_ids.size() ||
      static_cast<std::size_t>(scores.cols()) != treatment_labels.size()) {
    throw ValidationError("score matrix shape does not match ids/labels");
  }
  for (std::size_t j = 0; j < treatment_labels.size(); ++j) {
    if (treatment_labels[j] < 1) throw ValidationError("treatment labels must be >= 1");
    if (j > 0 && treatment_labels[j] <= treatment_labels[j - 1]) {
      throw ValidationError("treatment labels must be unique and ascending");
    }
  }
  if (!scores.allFinite()) throw ValidationError("scores contain non-finite values");
}

Eigen::Index UpliftScores::ColumnOf(int label) const {
  const auto it = std::find(treatment_labels.begin(), treatment_labels.end(), label);
  if (it == treatment_labels.end()) {
    throw ValidationError("treatment " + std::to_string(label) + " has no score column");
  }
  return it - treatment_labels.begin();
}

std::size_t Assignment::CountAssigned() const {
  return static_cast<std::size_t>(std::count_if(
      assigned.begin(), assigned.end(), [](int t) { return t != kNoTreatment; }));
}

Assignment DirectRankAssign(const UpliftScores& scores) {
  scores.Validate();
  const std::size_t n = scores.size();
  const Eigen::Index k = scores.scores.cols();
  // ranks(i, j): 1-based rank of customer i in column j.
  std::vector<std::vector<std::size_t>> ranks(static_cast<std::size_t>(k),
                                              std::vector<std::size_t>(n));
  for (Eigen::Index j = 0; j < k; ++j) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores.scores(static_cast<Eigen::Index>(a), j) >
             scores.scores(static_cast<Eigen::Index>(b), j);
    });
    for (std::size_t r = 0; r < n; ++r) ranks[static_cast<std::size_t>(j)][order[r]] = r + 1;
  }
  Assignment out = EmptyAssignment(scores);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < k; ++j) {
      if (ranks[static_cast<std::size_t>(j)][i] < ranks[static_cast<std::size_t>(best)][i]) {
        best = j;
      }
    }
    out.assigned[i] = scores.treatment_labels[static_cast<std::size_t>(best)];
    out.deciding_score[i] = scores.scores(static_cast<Eigen::Index>(i), best);
    out.deciding_stat[i] = static_cast<double>(ranks[static_cast<std::size_t>(best)][i]);
  }
  return out;
}

UpliftScores ZScoreStandardize(const UpliftScores& scores) {
  scores.Validate();
  const Eigen::Index n = scores.scores.rows();
  if (n < 2) throw ValidationError("z-score standardisation needs at least 2 customers");
  UpliftScores out = scores;
  for (Eigen::Index j = 0; j < scores.scores.cols(); ++j) {
    const auto column = scores.scores.col(j);
    const double mean = column.mean();
    const double sd = std::sqrt((column.array() - mean).square().mean());
    if (sd < kStdFloor) {
      out.scores.col(j).setZero();
    } else {
      out.scores.col(j) = (column.array() - mean) / sd;
    }
  }
  return out;
}

Assignment ZScoreAssign(const UpliftScores& scores) {
  const UpliftScores z = ZScoreStandardize(scores);
  Assignment out = EmptyAssignment(scores);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < z.scores.cols(); ++j) {
      if (z.scores(row, j) > z.scores(row, best)) best = j;
    }
    out.assigned[i] = scores.treatment_labels[static_cast<std::size_t>(best)];
    out.deciding_score[i] = scores.scores(row, best);
    out.deciding_stat[i] = z.scores(row, best);
  }
  return out;
}

Assignment ApplyCutoff(const Assignment& assignment, const UpliftScores& scores,
                       double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw ValidationError("top_fraction must lie in (0, 1]");
  }
  if (assignment.customer_ids != scores.customer_ids ||
      assignment.assigned.size() != assignment.size() ||
      assignment.deciding_score.size() != assignment.size() ||
      assignment.deciding_stat.size() != assignment.size()) {
    throw ValidationError("assignment and scores are not aligned");
  }
  const std::size_t n = assignment.size();
  std::vector<double> key(n);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (assignment.assigned[i] == kNoTreatment) continue;
    key[i] = scores.scores(static_cast<Eigen::Index>(i), scores.ColumnOf(assignment.assigned[i]));
    candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  const std::size_t keep = CutoffCount(top_fraction, n);
  Assignment out = assignment;
  for (std::size_t r = keep; r < candidates.size(); ++r) {
    out.assigned[candidates[r]] = kNoTreatment;
  }
  return out;
}

std::string ScoresToCsv(const UpliftScores& scores) {
  scores.Validate();
  std::string out = "customer_id";
  for (const int label : scores.treatment_labels) out += ",cate_" + std::to_string(label);
  out += "\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out += csv::Escape(scores.customer_ids[i]);
    for (Eigen::Index j = 0; j < scores.scores.cols(); ++j) {
      out += "," + csv::FormatDouble(scores.scores(static_cast<Eigen::Index>(i), j));
    }
    out += "\n";
  }
  return out;
}

UpliftScores ReadScoresCsv(const std::filesystem::path& path) {
  const csv::Table table = csv::Read(path);
  if (table.header.size() < 2 || table.header[0] != "customer_id") {
    throw ValidationError(path.string() + ": expected header customer_id,cate_<t>,...");
  }
  UpliftScores out;
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    long long label = 0;
    if (name.rfind("cate_", 0) != 0 || !csv::ParseInt(name.substr(5), label)) {
      throw ValidationError(path.string() + ": bad score column '" + name + "'");
    }
    out.treatment_labels.push_back(static_cast<int>(label));
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  out.scores.resize(n, static_cast<Eigen::Index>(out.treatment_labels.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    out.customer_ids.push_back(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      double v = 0.0;
      if (!csv::ParseDouble(row[c], v)) {
        throw ValidationError(path.string() + ": row " + std::to_string(i + 1) +
                              ", column '" + table.header[c] + "': bad number '" + row[c] +
                              "'");
      }
      out.scores(i, static_cast<Eigen::Index>(c - 1)) = v;
    }
  }
  out.Validate();
  return out;
}

std::string AssignmentToCsv(const Assignment& assignment) {
  std::string out = "customer_id,assigned_treatment,deciding_score,deciding_stat\n";
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    out += csv::Escape(assignment.customer_ids[i]) + "," +
           std::to_string(assignment.assigned[i]) + "," +
           csv::FormatDouble(assignment.deciding_score[i]) + "," +
           csv::FormatDouble(assignment.deciding_stat[i]) + "\n";
  }
  return out;
}

Assignment ReadAssignmentCsv(const std::filesystem::path& path) {
  const csv::Table table = csv::Read(path);
  const std::vector<std::string> expected = {"customer_id", "assigned_treatment",
                                             "deciding_score", "deciding_stat"};
  if (table.header != expected) {
    throw ValidationError(path.string() +
                          ": expected header customer_id,assigned_treatment,"
                          "deciding_score,deciding_stat");
  }
  Assignment out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long long label = 0;
    double score = 0.0, stat = 0.0;
    if (!csv::ParseInt(row[1], label) || !csv::ParseDouble(row[2], score) ||
        !csv::ParseDouble(row[3], stat) || (label < 1 && label != kNoTreatment)) {
      throw ValidationError(path.string() + ": malformed row " + std::to_string(i + 1));
    }
    out.customer_ids.push_back(row[0]);
    out.assigned.push_back(static_cast<int>(label));
    out.deciding_score.push_back(score);
    out.deciding_stat.push_back(stat);
  }
  return out;
}

}  // namespace multiuplift
