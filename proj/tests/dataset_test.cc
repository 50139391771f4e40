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
#include <functional>
#include <set>

#include "gtest/gtest.h"
#include "multiuplift/random.h"
#include "test_util.h"

namespace multiuplift {
namespace {

using ::multiuplift::testing::ScratchDir;

CampaignDataset MakeDataset(const std::vector<int>& treatments) {
  const std::size_t n = treatments.size();
  std::vector<std::string> ids;
  Matrix x(static_cast<Eigen::Index>(n), 2);
  std::vector<double> y;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("id" + std::to_string(i));
    x(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
    x(static_cast<Eigen::Index>(i), 1) = -0.5 * static_cast<double>(i);
    y.push_back(static_cast<double>(i % 2));
  }
  return CampaignDataset(ids, {"a", "b"}, x, treatments, y);
}

std::string ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(CampaignDatasetTest, RejectsBrokenInvariants) {
  Matrix x(2, 1);
  x << 1.0, 2.0;
  EXPECT_THROW(CampaignDataset({"a", "a"}, {"f"}, x, {0, 1}, {0, 1}), ValidationError);
  EXPECT_THROW(CampaignDataset({"a", "b"}, {"f"}, x, {0}, {0, 1}), ValidationError);
  EXPECT_THROW(CampaignDataset({"a", "b"}, {"f"}, x, {0, -1}, {0, 1}), ValidationError);
  EXPECT_THROW(CampaignDataset({"a", "b"}, {"f"}, x, {1, 1}, {0, 1}), MissingControlError);
  Matrix bad = x;
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(CampaignDataset({"a", "b"}, {"f"}, bad, {0, 1}, {0, 1}), ValidationError);
  EXPECT_THROW(CampaignDataset({}, {"f"}, Matrix(0, 1), {}, {}), ValidationError);
}

TEST(CampaignDatasetTest, LabelQueries) {
  const CampaignDataset d = MakeDataset({0, 2, 1, 0, 2, 2});
  EXPECT_EQ(d.TreatmentLabels(), (std::vector<int>{1, 2}));
  EXPECT_EQ(d.MaxTreatment(), 2);
  EXPECT_EQ(d.CountLabel(2), 3u);
  EXPECT_TRUE(d.HasBinaryOutcomes());
}

TEST(LoadCsvTest, ThreeRowFile) {
  ScratchDir dir;
  const auto path = dir.Write(
      "d.csv", "customer_id,f_a,treatment,outcome\nu1,0.5,0,1\nu2,-1,1,0\nu3,2e3,1,1\n");
  const CampaignDataset d = LoadCsv(path);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.num_features(), 1u);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"f_a"}));
  EXPECT_EQ(d.features()(2, 0), 2000.0);
  EXPECT_EQ(d.treatments(), (std::vector<int>{0, 1, 1}));
}

TEST(LoadCsvTest, ThreeTreatmentLabels) {
  ScratchDir dir;
  const auto path = dir.Write("d.csv",
                              "customer_id,x,treatment,outcome\n"
                              "a,1,0,0\nb,2,1,1\nc,3,2,0\nd,4,2,1\n");
  EXPECT_EQ(LoadCsv(path).MaxTreatment(), 2);
}

TEST(LoadCsvTest, NanCellNamesRowAndColumn) {
  ScratchDir dir;
  const auto path = dir.Write("d.csv",
                              "customer_id,age,income,treatment,outcome\n"
                              "a,1,5,0,0\nb,2,NaN,1,1\n");
  const std::string message = ErrorOf([&] { LoadCsv(path); });
  EXPECT_NE(message.find("row 2"), std::string::npos) << message;
  EXPECT_NE(message.find("'income'"), std::string::npos) << message;
}

TEST(LoadCsvTest, ErrorsCarryLocation) {
  ScratchDir dir;
  const auto non_numeric = dir.Write(
      "a.csv", "customer_id,x,treatment,outcome\na,1,0,0\nb,abc,1,1\n");
  EXPECT_NE(ErrorOf([&] { LoadCsv(non_numeric); }).find("column 'x'"), std::string::npos);

  const auto duplicate = dir.Write(
      "b.csv", "customer_id,x,treatment,outcome\na,1,0,0\na,2,1,1\n");
  const std::string dup = ErrorOf([&] { LoadCsv(duplicate); });
  EXPECT_NE(dup.find("duplicate"), std::string::npos) << dup;
  EXPECT_NE(dup.find("row 2"), std::string::npos) << dup;

  const auto bad_label = dir.Write(
      "c.csv", "customer_id,x,treatment,outcome\na,1,0,0\nb,2,1.5,1\n");
  EXPECT_NE(ErrorOf([&] { LoadCsv(bad_label); }).find("column 'treatment'"),
            std::string::npos);

  const auto missing_outcome = dir.Write("d.csv", "customer_id,x,treatment\na,1,0\n");
  EXPECT_THROW(LoadCsv(missing_outcome), ValidationError);
}

TEST(LoadCsvTest, NoControlRows) {
  ScratchDir dir;
  const auto path = dir.Write("d.csv", "customer_id,x,treatment,outcome\na,1,1,0\n");
  EXPECT_THROW(LoadCsv(path), MissingControlError);
}

TEST(LoadCsvTest, MissingFileIsIoError) {
  ScratchDir dir;
  EXPECT_THROW(LoadCsv(dir / "nope.csv"), IoError);
}

TEST(LoadCsvTest, CustomColumnNames) {
  ScratchDir dir;
  const auto path = dir.Write("d.csv", "uid,arm,x,bought\nu1,0,1.0,0\nu2,1,2.0,1\n");
  ColumnNames names{"uid", "arm", "bought"};
  const CampaignDataset d = LoadCsv(path, names);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"x"}));
  EXPECT_EQ(d.treatments(), (std::vector<int>{0, 1}));
}

TEST(LoadFeatureCsvTest, LabelsAreOptional) {
  ScratchDir dir;
  const auto bare = dir.Write("a.csv", "customer_id,x,y\na,1,2\n");
  const FeatureTable t = LoadFeatureCsv(bare);
  EXPECT_EQ(t.feature_names, (std::vector<std::string>{"x", "y"}));
  const auto labelled = dir.Write("b.csv", "customer_id,x,treatment,outcome,y\na,1,3,0,2\n");
  const FeatureTable u = LoadFeatureCsv(labelled);
  EXPECT_EQ(u.feature_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(u.features(0, 1), 2.0);
}

TEST(CsvRoundTripTest, WriteThenLoadReproducesCells) {
  ScratchDir dir;
  Rng rng(9);
  const std::size_t n = 200;
  std::vector<std::string> ids;
  std::vector<int> t;
  std::vector<double> y;
  Matrix x(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(i % 7 == 0 ? "id,with \"quote\" " + std::to_string(i)
                             : "c" + std::to_string(i));
    t.push_back(static_cast<int>(rng.UniformIndex(3)));
    y.push_back(rng.Uniform01() < 0.3 ? 1.0 : 0.0);
    for (int j = 0; j < 3; ++j) x(i, j) = rng.Normal() * std::pow(10.0, j * 5 - 5);
  }
  t[0] = 0;
  const CampaignDataset d(ids, {"f1", "f 2", "f,3"}, x, t, y);
  WriteCsv(d, dir / "d.csv");
  const CampaignDataset back = LoadCsv(dir / "d.csv");
  EXPECT_EQ(back.customer_ids(), d.customer_ids());
  EXPECT_EQ(back.feature_names(), d.feature_names());
  EXPECT_EQ(back.treatments(), d.treatments());
  EXPECT_EQ(back.outcomes(), d.outcomes());
  EXPECT_TRUE(back.features() == d.features());
  // A second write is byte-identical to the first.
  EXPECT_EQ(ToCsv(back), ToCsv(d));
}

TEST(SplitTest, ExactStratification) {
  std::vector<int> t(100);
  for (int i = 0; i < 100; ++i) t[i] = i % 2;
  const CampaignDataset d = MakeDataset(t);
  const DatasetSplit s = Split(d, 0.2, 7);
  EXPECT_EQ(s.validation.CountLabel(0), 10u);
  EXPECT_EQ(s.validation.CountLabel(1), 10u);
  EXPECT_EQ(s.train.size(), 80u);
}

TEST(SplitTest, DeterministicForSeed) {
  std::vector<int> t(100);
  for (int i = 0; i < 100; ++i) t[i] = i % 3;
  const CampaignDataset d = MakeDataset(t);
  EXPECT_EQ(Split(d, 0.3, 5).validation.customer_ids(),
            Split(d, 0.3, 5).validation.customer_ids());
  EXPECT_NE(Split(d, 0.3, 5).validation.customer_ids(),
            Split(d, 0.3, 6).validation.customer_ids());
}

TEST(SplitTest, TwoRowsPerGroup) {
  const CampaignDataset d = MakeDataset({0, 1, 0, 1});
  const DatasetSplit s = Split(d, 0.5, 1);
  EXPECT_EQ(s.validation.CountLabel(0), 1u);
  EXPECT_EQ(s.validation.CountLabel(1), 1u);
}

TEST(SplitTest, GroupTooSmall) {
  const CampaignDataset d = MakeDataset({0, 0, 1});
  EXPECT_THROW(Split(d, 0.5, 1), ValidationError);
  EXPECT_THROW(Split(MakeDataset({0, 0, 1, 1}), 1.0, 1), ValidationError);
}

TEST(SplitTest, PartitionAndProportionProperty) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    // Per-group rounding moves a proportion by at most about 2.5 rows over
    // the train size, so train keeps at least 150 rows.
    const std::size_t n = 500 + rng.UniformIndex(1000);
    std::vector<int> t(n);
    for (auto& v : t) v = static_cast<int>(rng.UniformIndex(4));
    t[0] = 0, t[1] = 0, t[2] = 1, t[3] = 1, t[4] = 2, t[5] = 2, t[6] = 3, t[7] = 3;
    const CampaignDataset d = MakeDataset(t);
    const double frac = 0.1 + 0.6 * rng.Uniform01();
    const DatasetSplit s = Split(d, frac, trial);
    ASSERT_EQ(s.train.size() + s.validation.size(), n);
    std::set<std::string> all(s.train.customer_ids().begin(), s.train.customer_ids().end());
    for (const auto& id : s.validation.customer_ids()) ASSERT_TRUE(all.insert(id).second);
    ASSERT_EQ(all.size(), n);
    for (int label = 0; label < 4; ++label) {
      const double in_input = static_cast<double>(d.CountLabel(label)) / n;
      const double in_train =
          static_cast<double>(s.train.CountLabel(label)) / s.train.size();
      EXPECT_NEAR(in_train, in_input, 0.02) << trial;
    }
  }
}

TEST(FilterOneVsControlTest, KeepsControlAndRemapsLabel) {
  const CampaignDataset d = MakeDataset({0, 1, 2, 0, 1});
  const CampaignDataset f = FilterOneVsControl(d, 2);
  EXPECT_EQ(f.customer_ids(), (std::vector<std::string>{"id0", "id2", "id3"}));
  EXPECT_EQ(f.treatments(), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(f.size(), d.CountLabel(0) + d.CountLabel(2));
}

TEST(FilterOneVsControlTest, AbsentTreatment) {
  EXPECT_THROW(FilterOneVsControl(MakeDataset({0, 0, 0}), 1), ValidationError);
  EXPECT_THROW(FilterOneVsControl(MakeDataset({0, 1}), 0), ValidationError);
}

TEST(FilterOneVsControlTest, BinaryInputIsIdentity) {
  const CampaignDataset d = MakeDataset({0, 1, 1, 0});
  const CampaignDataset f = FilterOneVsControl(d, 1);
  EXPECT_EQ(f.customer_ids(), d.customer_ids());
  EXPECT_EQ(f.treatments(), d.treatments());
  EXPECT_EQ(f.outcomes(), d.outcomes());
  EXPECT_TRUE(f.features() == d.features());
}

}  // namespace
}  // namespace multiuplift
