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

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.h"

namespace slid {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun RunCli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string(SLID_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + (dir / "stderr.txt").string();
  CliRun r;
  r.status = std::system(cmd.c_str());
  r.out = testing::ReadText(out);
  return r;
}

constexpr const char* kTinyConfig = R"({
  "seed": 2,
  "synth": {"languages": ["sa", "sb"], "songs_per_language": 10,
            "artists_per_language": 10, "song_duration": 8.0, "seed": 4},
  "segmentation": {"length": 4.0},
  "acoustic": {"conv_filters": 2, "lstm_layers": 1, "lstm_hidden": 8},
  "train": {"learning_rate": 0.01, "batch_size": 8, "max_epochs": 2},
  "linear": {"iterations": 50},
  "evaluation": {"resamples": 50}
})";

TEST(CliTest, SelftestPasses) {
  const auto dir = testing::MakeTempDir("cli");
  const CliRun r = RunCli("selftest", dir);
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliTest, MissingSubcommandFails) {
  const auto dir = testing::MakeTempDir("cli");
  EXPECT_NE(RunCli("", dir).status, 0);
  EXPECT_NE(RunCli("train --mode two_step", dir).status, 0);
  const std::string err = testing::ReadText(dir / "stderr.txt");
  EXPECT_NE(err.find("error\t"), std::string::npos) << err;
}

TEST(CliTest, SynthTrainEvaluatePredict) {
  const auto dir = testing::MakeTempDir("cli");
  testing::WriteText(dir / "config.json", kTinyConfig);
  const std::string config = "--config " + (dir / "config.json").string();
  const fs::path data = dir / "data";
  const fs::path run = dir / "run";

  CliRun r = RunCli("synth " + config + " --run-dir " + data.string(), dir);
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("songs=20"), std::string::npos);
  ASSERT_TRUE(fs::exists(data / "manifest.tsv"));

  const std::string manifest = " --manifest " + (data / "manifest.tsv").string();
  r = RunCli("train --mode statistics " + config + manifest + " --run-dir " +
                 run.string(),
             dir);
  ASSERT_EQ(r.status, 0) << testing::ReadText(dir / "stderr.txt");
  EXPECT_TRUE(fs::exists(run / "train.log"));

  r = RunCli("evaluate --run-dir " + run.string(), dir);
  ASSERT_EQ(r.status, 0) << testing::ReadText(dir / "stderr.txt");
  EXPECT_NE(r.out.find("balanced_accuracy"), std::string::npos);
  EXPECT_NE(testing::ReadText(run / "report.json").find("\"balanced_accuracy\""),
            std::string::npos);

  r = RunCli("predict --run-dir " + run.string() + " --song sa_000", dir);
  ASSERT_EQ(r.status, 0) << testing::ReadText(dir / "stderr.txt");
  std::istringstream lines(r.out);
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  ASSERT_EQ(rows.size(), 1u) << r.out;
  std::istringstream fields(rows[0]);
  std::string id, verdict, score;
  std::getline(fields, id, '\t');
  std::getline(fields, verdict, '\t');
  std::getline(fields, score, '\t');
  EXPECT_EQ(id, "sa_000");
  EXPECT_TRUE(verdict == "sa" || verdict == "sb" || verdict == "instrumental")
      << verdict;
  EXPECT_FALSE(score.empty());
}

}  // namespace
}  // namespace slid
