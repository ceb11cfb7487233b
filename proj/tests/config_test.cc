// Copyright 2026 The SLID Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slid/config/run_config.h"

#include <gtest/gtest.h>

#include <string>

#include "slid/error.h"
#include "test_util.h"

namespace slid::config {
namespace {

std::string ConfigError(const std::string& json) {
  try {
    RunConfig::FromJson(json);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "no error for " << json;
  return "";
}

TEST(RunConfigTest, DefaultsAreValid) {
  RunConfig c;
  EXPECT_NO_THROW(c.Validate());
}

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig c = RunConfig::FromJson(R"({
    "seed": 9, "workers": 2,
    "synth": {"languages": ["xa", "xb"], "songs_per_language": 12},
    "acoustic": {"conv_filters": 4, "lstm_hidden": 16},
    "train": {"learning_rate": 0.01, "max_epochs": 3},
    "scenario": {"kind": "open", "targets": ["xa"], "out_of_domain": ["xb"]}
  })");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.train.seed, 9u);
  EXPECT_EQ(c.train.workers, 2);
  EXPECT_EQ(c.synth.languages, (std::vector<std::string>{"xa", "xb"}));
  EXPECT_EQ(c.acoustic.conv_filters, 4);
  EXPECT_TRUE(c.dataset.scenario.open());
  const RunConfig again = RunConfig::FromJson(c.ToJson());
  EXPECT_EQ(again.ToJson(), c.ToJson());
  EXPECT_EQ(again.acoustic, c.acoustic);
  EXPECT_EQ(again.train, c.train);
  EXPECT_EQ(again.dataset.scenario, c.dataset.scenario);
}

TEST(RunConfigTest, UnknownKeyNamesPath) {
  EXPECT_NE(ConfigError(R"({"train": {"learnin_rate": 0.1}})")
                .find("train.learnin_rate: unknown key"),
            std::string::npos);
  EXPECT_NE(ConfigError(R"({"bogus": 1})").find("bogus: unknown key"),
            std::string::npos);
}

TEST(RunConfigTest, WrongTypeNamesPath) {
  EXPECT_NE(ConfigError(R"({"train": {"batch_size": "big"}})")
                .find("train.batch_size: expected an integer"),
            std::string::npos);
  EXPECT_NE(ConfigError(R"({"acoustic": 3})").find("acoustic: expected an object"),
            std::string::npos);
}

TEST(RunConfigTest, RejectsInvalidValues) {
  EXPECT_FALSE(ConfigError(R"({"train": {"learning_rate": -1}})").empty());
  EXPECT_FALSE(ConfigError(R"({"workers": 0})").empty());
  EXPECT_FALSE(ConfigError(R"({"scenario": {"kind": "half"}})").empty());
  EXPECT_FALSE(ConfigError(R"({"acoustic": {"feature_bins": 40}})").empty());
}

TEST(RunConfigTest, ShippedConfigsLoad) {
  for (const char* name : {"default.json", "synthetic_closed.json",
                           "synthetic_open.json"}) {
    const auto path = std::filesystem::path(SLID_CONFIG_DIR) / name;
    EXPECT_NO_THROW(RunConfig::Load(path)) << name;
  }
}

TEST(RunConfigTest, MissingFileThrows) {
  try {
    RunConfig::Load("/nonexistent/config.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  }
}

TEST(RunConfigTest, RelativeManifestResolvesAgainstConfigDir) {
  const auto dir = testing::MakeTempDir("config");
  testing::WriteText(dir / "run.json", R"({"manifest": "data/m.tsv"})");
  const RunConfig c = RunConfig::Load(dir / "run.json");
  EXPECT_EQ(c.manifest, dir / "data/m.tsv");
}

}  // namespace
}  // namespace slid::config
