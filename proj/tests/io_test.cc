// Copyright 2026 The sympref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sympref/io.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "sympref/errors.h"

namespace sympref {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("sympref_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(IoTest, EmpiricalDatasetRoundTrip) {
  TempDir tmp;
  TabularOptions opt;
  opt.n_pairs = 200;
  opt.features = true;
  PreferenceDataset ds = GenerateTabular(opt, 11);
  Rng rng(5, Stream::kNoise);
  ds = InjectNoise(ds, NoiseSpec::Asymmetric(0.2, 0.1), rng);
  WriteDataset(ds, tmp.path());
  const PreferenceDataset back = ReadDataset(tmp.path());
  EXPECT_EQ(back.space(), ds.space());
  EXPECT_EQ(back.records(), ds.records());
  EXPECT_EQ(back.seed(), ds.seed());
  ASSERT_TRUE(back.noise().has_value());
  EXPECT_EQ(*back.noise(), *ds.noise());
  EXPECT_FALSE(back.exact());
}

TEST(IoTest, ExactDatasetKeepsMassBitwise) {
  TempDir tmp;
  const PreferenceDataset ds = MakeExactBtUniform(MakeSpace({0.0, 0.3, 1.7, -2.1}));
  WriteDataset(ds, tmp.path());
  const PreferenceDataset back = ReadDataset(tmp.path());
  ASSERT_TRUE(back.exact());
  EXPECT_EQ(back.mass(), ds.mass());
  EXPECT_EQ(back.records(), ds.records());
}

TEST(IoTest, MalformedCsvIsIoError) {
  TempDir tmp;
  WriteDataset(MakeExactBtUniform(MakeSpace({0.0, 1.0})), tmp.path());
  WriteTextFile(tmp.path() / kDataFile, "a1,a2,clean_label,noisy_label,mass\na0,a1,2,1,0.5\n");
  EXPECT_THROW(ReadDataset(tmp.path()), IoError);
  WriteTextFile(tmp.path() / kDataFile, "a1,a2,clean_label,noisy_label,mass\na0,zz,1,1,0.5\n");
  EXPECT_THROW(ReadDataset(tmp.path()), IoError);
  WriteTextFile(tmp.path() / kDataFile, "x,y\n");
  EXPECT_THROW(ReadDataset(tmp.path()), IoError);
  EXPECT_THROW(ReadDataset(tmp.path() / "missing"), IoError);
}

TEST(IoTest, ModelRoundTrip) {
  const RewardModel m = RewardModel::Tabular({0.1, -1.0 / 3.0, 2e-300}, 20.0);
  EXPECT_EQ(ModelFromJson(ModelToJson(m, {{"loss", "sigmoid"}})), m);
  const RewardModel lin = RewardModel::Linear({1.5, -0.25});
  EXPECT_EQ(ModelFromJson(ModelToJson(lin)), lin);
  EXPECT_THROW(ModelFromJson("{\"kind\":\"cnn\",\"params\":[]}"), IoError);
  EXPECT_THROW(ModelFromJson("not json"), IoError);
}

TEST(IoTest, PolicyRoundTripAndValidation) {
  const PolicyTable p = OptimalPolicy({0.0, 1.0, 2.0}, UniformReference(3), 0.7);
  const PolicyTable back = PolicyFromJson(PolicyToJson(p));
  EXPECT_EQ(back.probs, p.probs);
  EXPECT_EQ(back.reference, p.reference);
  EXPECT_EQ(back.beta, p.beta);
  EXPECT_THROW(PolicyFromJson("{\"probs\":[0.5,0.6],\"reference\":[0.5,0.5],\"beta\":1}"),
               IoError);
}

TEST(IoTest, TraceCsvShape) {
  RiskTrace t;
  t.noisy_risk = {0.5, 0.25};
  t.clean_risk = {0.5, 0.125};
  t.grad_norm = {1.0, 0.5};
  EXPECT_EQ(TraceToCsv(t), "epoch,noisy_risk,clean_risk,grad_norm\n0,0.5,0.5,1\n1,0.25,0.125,0.5\n");
}

TEST(IoTest, ReportRowHasEightFields) {
  DiagnosticsReport r;
  r.loss = "cdpo:eps=0.1,swapped=1";
  r.noise = NoiseSpec::Symmetric(0.2);
  r.seed = 3;
  r.reward_accuracy = 0.9;
  r.rank_preservation_rate = 1.0;
  EXPECT_EQ(ReportCsvRow(r), "\"cdpo:eps=0.1,swapped=1\",0.2,0.2,3,0.9,1,,");
}

TEST(IoTest, FormatNumberRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-310, 1e300}) {
    EXPECT_EQ(std::strtod(FormatNumber(v).c_str(), nullptr), v);
  }
}

}  // namespace
}  // namespace sympref
