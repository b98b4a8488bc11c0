// Copyright 2026 The SAERS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "saers/checkpoint.h"

#include <cmath>

#include "gtest/gtest.h"
#include "json.hpp"
#include "saers/error.h"
#include "saers/synthetic.h"
#include "test_util.h"

namespace saers {
namespace {

using ::saers::testing::ReadText;
using ::saers::testing::TempDir;
using ::saers::testing::WriteText;

Checkpoint MakeCheckpoint(Variant v) {
  const GradCheckCase gc = MakeGradCheckCase(3, v, 17);
  Checkpoint c;
  c.params = gc.params;
  c.config.d = 3;
  c.config.variant = v;
  c.config.seed = 17;
  c.config.epochs = 4;
  c.stats.epoch_loss = {0.69, 0.5, 0.4, 0.35};
  c.stats.val_auc = {{2, 0.61}, {4, 0.66}};
  c.stats.best_epoch = 4;
  c.stats.best_val_auc = 0.66;
  c.stats.epochs_run = 4;
  for (int u = 0; u < c.params.num_users(); ++u) c.user_ids.push_back("user" + std::to_string(u));
  return c;
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  for (Variant v : {Variant::kSafo, Variant::kSaersMinusSaf, Variant::kSaers}) {
    TempDir dir;
    Checkpoint c = MakeCheckpoint(v);
    c.params.attention_b2 = -0.123456789012345678;
    SaveCheckpoint(c, dir / "ck");
    const Checkpoint back = LoadCheckpoint(dir / "ck");
    EXPECT_EQ(back.params, c.params);
    EXPECT_EQ(back.user_ids, c.user_ids);
    EXPECT_EQ(back.config.variant, v);
    EXPECT_EQ(back.config.seed, 17u);
    EXPECT_EQ(back.stats.epoch_loss, c.stats.epoch_loss);
    EXPECT_EQ(back.stats.val_auc, c.stats.val_auc);
    EXPECT_EQ(back.stats.best_epoch, 4);
  }
}

TEST(CheckpointTest, ManifestIsVersionStamped) {
  TempDir dir;
  SaveCheckpoint(MakeCheckpoint(Variant::kSaers), dir / "ck");
  const auto j = nlohmann::json::parse(ReadText(dir / "ck" / "manifest.json"));
  EXPECT_EQ(j["format"], kCheckpointFormat);
  EXPECT_EQ(j["version"], kCheckpointVersion);
  EXPECT_EQ(j["config"]["d"], 3);
  EXPECT_EQ(j["epoch"], 4);
  EXPECT_TRUE(j["tensors"].contains("user_embeddings"));
}

TEST(CheckpointTest, NaNStatisticsSurvive) {
  TempDir dir;
  Checkpoint c = MakeCheckpoint(Variant::kSafo);
  c.stats.best_val_auc = std::nan("");
  c.stats.val_auc.clear();
  SaveCheckpoint(c, dir / "ck");
  EXPECT_TRUE(std::isnan(LoadCheckpoint(dir / "ck").stats.best_val_auc));
}

TEST(CheckpointTest, MissingTensorIsNamed) {
  TempDir dir;
  SaveCheckpoint(MakeCheckpoint(Variant::kSaers), dir / "ck");
  const auto j = nlohmann::json::parse(ReadText(dir / "ck" / "manifest.json"));
  const std::string file = j["tensors"]["attention_w1"];
  std::filesystem::remove(dir / "ck" / file);
  try {
    LoadCheckpoint(dir / "ck");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("attention_w1"), std::string::npos) << e.what();
  }
}

TEST(CheckpointTest, MismatchedDimensionIsConfigError) {
  TempDir dir;
  SaveCheckpoint(MakeCheckpoint(Variant::kSaers), dir / "ck");
  auto j = nlohmann::json::parse(ReadText(dir / "ck" / "manifest.json"));
  j["config"]["d"] = 4;
  WriteText(dir / "ck" / "manifest.json", j.dump());
  EXPECT_THROW(LoadCheckpoint(dir / "ck"), ConfigError);
}

TEST(CheckpointTest, WrongVersionOrFormatIsFormatError) {
  TempDir dir;
  SaveCheckpoint(MakeCheckpoint(Variant::kSaers), dir / "ck");
  const std::string good = ReadText(dir / "ck" / "manifest.json");
  auto j = nlohmann::json::parse(good);
  j["version"] = kCheckpointVersion + 1;
  WriteText(dir / "ck" / "manifest.json", j.dump());
  EXPECT_THROW(LoadCheckpoint(dir / "ck"), FormatError);
  j = nlohmann::json::parse(good);
  j["format"] = "something-else";
  WriteText(dir / "ck" / "manifest.json", j.dump());
  EXPECT_THROW(LoadCheckpoint(dir / "ck"), FormatError);
  WriteText(dir / "ck" / "manifest.json", "{]");
  EXPECT_THROW(LoadCheckpoint(dir / "ck"), FormatError);
}

TEST(CheckpointTest, EvaluationIsIdenticalAfterReload) {
  SyntheticConfig sc;
  sc.users = 40;
  sc.items = 200;
  sc.m = 5;
  sc.m_g = 4;
  sc.seed = 2;
  const SyntheticCorpus corpus = MakeSyntheticCorpus(sc);
  const SplitDataset split = SplitLeaveOneOut(corpus.interactions, 2);
  TrainConfig tc;
  tc.d = 4;
  tc.epochs = 3;
  tc.seed = 2;
  const TrainResult r = Train(tc, split, corpus.catalog);
  TempDir dir;
  SaveCheckpoint({r.params, tc, r.stats, split.full.user_ids()}, dir / "ck");
  const Checkpoint back = LoadCheckpoint(dir / "ck");
  const auto items = AlignItems(split, corpus.catalog);
  const double before = Auc(SaersScorer(r.params, items), split, Scenario::kAll).value;
  const double after = Auc(SaersScorer(back.params, items), split, Scenario::kAll).value;
  EXPECT_EQ(before, after);
}

}  // namespace
}  // namespace saers
