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

#include "slid/eval/metrics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "slid/error.h"
#include "slid/eval/predict.h"
#include "slid/eval/report.h"

namespace slid::eval {
namespace {

TEST(MetricsTest, DiagonalIsPerfect) {
  const auto cm = ConfusionMatrix::FromCounts({{3, 0, 0}, {0, 5, 0}, {0, 0, 2}});
  EXPECT_DOUBLE_EQ(BalancedAccuracy(cm), 100.0);
  EXPECT_DOUBLE_EQ(MacroF1(cm), 100.0);
  EXPECT_DOUBLE_EQ(Accuracy(cm), 100.0);
}

TEST(MetricsTest, BalancedAccuracyAveragesRecalls) {
  const auto cm = ConfusionMatrix::FromCounts({{4, 0}, {3, 3}});
  EXPECT_DOUBLE_EQ(BalancedAccuracy(cm), 75.0);
}

TEST(MetricsTest, F1HandComputed) {
  // Class 0: P = 1, R = 0.5, F1 = 2/3. Class 1: P = 2/3, R = 1, F1 = 0.8.
  const auto cm = ConfusionMatrix::FromCounts({{1, 1}, {0, 2}});
  const auto f1 = F1PerClass(cm);
  EXPECT_NEAR(f1[0], 200.0 / 3.0, 1e-12);
  EXPECT_NEAR(f1[1], 80.0, 1e-12);
  EXPECT_NEAR(MacroF1(cm), (200.0 / 3.0 + 80.0) / 2.0, 1e-12);
  EXPECT_NEAR(MacroF1(cm), 73.33, 5e-3);
}

TEST(MetricsTest, NeverPredictedClassHasZeroF1) {
  const auto cm = ConfusionMatrix::FromCounts({{0, 2}, {0, 2}});
  EXPECT_EQ(F1PerClass(cm)[0], 0.0);
}

TEST(MetricsTest, InvariantUnderClassPermutation) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> count(1, 9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<std::int64_t>> counts(4, std::vector<std::int64_t>(4));
    for (auto& row : counts) {
      for (auto& v : row) v = count(rng);
    }
    std::vector<int> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto permuted = counts;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) permuted[perm[i]][perm[j]] = counts[i][j];
    }
    const auto a = ConfusionMatrix::FromCounts(counts);
    const auto b = ConfusionMatrix::FromCounts(permuted);
    EXPECT_NEAR(BalancedAccuracy(a), BalancedAccuracy(b), 1e-12);
    EXPECT_NEAR(MacroF1(a), MacroF1(b), 1e-12);
  }
}

TEST(MetricsTest, BalancedSetMatchesAccuracy) {
  const auto cm = ConfusionMatrix::FromCounts({{3, 1, 1}, {0, 4, 1}, {2, 2, 1}});
  EXPECT_NEAR(BalancedAccuracy(cm), Accuracy(cm), 1e-12);
}

TEST(MetricsTest, EmptyClassThrows) {
  const auto cm = ConfusionMatrix::FromCounts({{2, 0}, {0, 0}});
  EXPECT_THROW(BalancedAccuracy(cm), Error);
  EXPECT_THROW(MacroF1(cm), Error);
  EXPECT_DOUBLE_EQ(*BalancedAccuracyOverPresent(cm), 100.0);
}

TEST(MetricsTest, AbstentionsCountAsMisses) {
  ConfusionMatrix cm(2);
  cm.Add(0, 0);
  cm.Add(0, -1);
  cm.Add(1, 1);
  EXPECT_DOUBLE_EQ(BalancedAccuracy(cm), 75.0);
  EXPECT_EQ(cm.abstained(0), 1);
  EXPECT_THROW(cm.Add(2, 0), Error);
}

std::optional<double> Bacc2(std::span<const SongRecord> s) {
  const auto cm = BuildConfusion(s, 2);
  if (cm.row_total(0) == 0 || cm.row_total(1) == 0) return std::nullopt;
  return BalancedAccuracy(cm);
}

std::vector<SongRecord> NoisyRecords(int n) {
  std::vector<SongRecord> r;
  for (int i = 0; i < n; ++i) r.push_back({i % 2, (i % 3 == 0) ? 1 - i % 2 : i % 2});
  return r;
}

TEST(BootstrapTest, AllCorrectHasZeroError) {
  std::vector<SongRecord> r;
  for (int i = 0; i < 10; ++i) r.push_back({i % 2, i % 2});
  EXPECT_EQ(BootstrapStdError(Bacc2, r, 200, 3), 0.0);
}

TEST(BootstrapTest, DeterministicPerSeed) {
  const auto r = NoisyRecords(30);
  EXPECT_EQ(BootstrapStdError(Bacc2, r, 300, 4), BootstrapStdError(Bacc2, r, 300, 4));
  EXPECT_GT(BootstrapStdError(Bacc2, r, 300, 4), 0.0);
}

TEST(BootstrapTest, ErrorShrinksWithSampleSize) {
  const auto r = NoisyRecords(30);
  std::vector<SongRecord> r4;
  for (int k = 0; k < 4; ++k) r4.insert(r4.end(), r.begin(), r.end());
  const double se1 = BootstrapStdError(Bacc2, r, 2000, 5);
  const double se4 = BootstrapStdError(Bacc2, r4, 2000, 5);
  EXPECT_NEAR(se4 / se1, 0.5, 0.1);
}

TEST(AggregateTest, MeansUsableSegments) {
  const std::vector<std::optional<std::vector<double>>> scores = {
      std::vector<double>{0.6, 0.4}, std::nullopt, std::vector<double>{0.8, 0.2}};
  const auto p = AggregateSegments("s1", scores, {"en", "fr"});
  EXPECT_EQ(p.predicted, 0);
  EXPECT_EQ(p.verdict, "en");
  ASSERT_EQ(p.scores.size(), 2u);
  EXPECT_NEAR(p.scores[0], 0.7, 1e-12);
  EXPECT_NEAR(p.scores[1], 0.3, 1e-12);
  EXPECT_EQ(p.usable_segments, 2);
  EXPECT_EQ(p.total_segments, 3);
  EXPECT_EQ(p.ToLine(), "s1\ten\t0.700000");
}

TEST(AggregateTest, AllInstrumental) {
  const std::vector<std::optional<std::vector<double>>> scores(3);
  const auto p = AggregateSegments("s2", scores, {"en", "fr"});
  EXPECT_EQ(p.predicted, -1);
  EXPECT_EQ(p.verdict, kInstrumentalVerdict);
  EXPECT_TRUE(p.scores.empty());
}

TEST(AggregateTest, TieGoesToLowestIndex) {
  const std::vector<std::optional<std::vector<double>>> scores = {
      std::vector<double>{0.2, 0.4, 0.4}};
  EXPECT_EQ(AggregateSegments("s", scores, {"a", "b", "c"}).predicted, 1);
  EXPECT_EQ(ArgmaxLowestIndex(std::vector<double>{1, 1, 1}), 0);
}

TEST(AggregateTest, OrderAndScaleInvariant) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::optional<std::vector<double>>> scores;
    for (int s = 0; s < 5; ++s) scores.push_back(std::vector<double>{u(rng), u(rng), u(rng)});
    const int base = AggregateSegments("x", scores, {"a", "b", "c"}).predicted;
    std::shuffle(scores.begin(), scores.end(), rng);
    EXPECT_EQ(AggregateSegments("x", scores, {"a", "b", "c"}).predicted, base);
    for (auto& s : scores) {
      for (double& v : *s) v *= 3.5;
    }
    EXPECT_EQ(AggregateSegments("x", scores, {"a", "b", "c"}).predicted, base);
  }
}

corpus::Song MakeSong(const std::string& id, const std::string& language) {
  corpus::Song s;
  s.id = id;
  s.artist_id = "a_" + id;
  s.language = language;
  s.duration = 30.0;
  return s;
}

SongPrediction Predict(const std::string& id, int cls, std::size_t classes,
                       const std::vector<std::string>& names) {
  SongPrediction p;
  p.song_id = id;
  p.predicted = cls;
  p.verdict = cls < 0 ? kInstrumentalVerdict : names[cls];
  if (cls >= 0) {
    p.scores.assign(classes, 0.0);
    p.scores[cls] = 1.0;
  }
  return p;
}

TEST(RunScenarioTest, ClosedAllCorrect) {
  train::Scenario scenario;
  scenario.targets = {"en", "fr"};
  train::SplitData split;
  std::vector<SongPrediction> preds;
  for (int i = 0; i < 6; ++i) {
    const std::string id = "s" + std::to_string(i);
    split.songs.push_back(MakeSong(id, i % 2 ? "fr" : "en"));
    preds.push_back(Predict(id, i % 2, 2, scenario.targets));
  }
  const auto r = RunScenario(preds, split, scenario, {"en", "fr"}, "two_step",
                             {200, 1});
  EXPECT_DOUBLE_EQ(r.balanced_accuracy.value, 100.0);
  EXPECT_DOUBLE_EQ(r.balanced_accuracy.se, 0.0);
  EXPECT_DOUBLE_EQ(r.macro_f1.value, 100.0);
  EXPECT_EQ(r.macro_f1.se, 0.0);
  EXPECT_FALSE(r.others_f1.has_value());
  EXPECT_NE(r.ToJson().find("\"balanced_accuracy\""), std::string::npos);
}

TEST(RunScenarioTest, OpenSetBreaksDownOthers) {
  train::Scenario scenario;
  scenario.kind = "open";
  scenario.targets = {"en", "fr"};
  scenario.out_of_domain = {"xx"};
  const auto names = scenario.ClassNames();
  ASSERT_EQ(names.size(), 3u);
  train::SplitData split;
  std::vector<SongPrediction> preds;
  const std::vector<std::pair<std::string, int>> songs = {
      {"en", 0}, {"fr", 1}, {"de", 2}, {"de", 0}, {"xx", 2}, {"xx", 2}, {"xx", 1}};
  for (std::size_t i = 0; i < songs.size(); ++i) {
    const std::string id = "s" + std::to_string(i);
    split.songs.push_back(MakeSong(id, songs[i].first));
    preds.push_back(Predict(id, songs[i].second, 3, names));
  }
  const auto r = RunScenario(preds, split, scenario, {"en", "fr", "de"}, "joint",
                             {100, 1});
  EXPECT_EQ(r.others_in_domain_songs, 2);
  EXPECT_EQ(r.others_out_of_domain_songs, 3);
  EXPECT_NEAR(*r.others_in_domain_accuracy, 50.0, 1e-12);
  EXPECT_NEAR(*r.others_out_of_domain_accuracy, 200.0 / 3.0, 1e-12);
  ASSERT_TRUE(r.target_macro_f1.has_value());
  ASSERT_TRUE(r.others_f1.has_value());
  const std::string json = r.ToJson();
  EXPECT_NE(json.find("others_in_domain_accuracy"), std::string::npos);
  EXPECT_NE(json.find("others_out_of_domain_accuracy"), std::string::npos);
}

TEST(RunScenarioTest, LabelSpaceMismatchThrows) {
  train::Scenario scenario;
  scenario.targets = {"en", "fr"};
  train::SplitData split;
  split.songs.push_back(MakeSong("s0", "en"));
  std::vector<SongPrediction> preds = {Predict("s0", 2, 3, {"a", "b", "c"})};
  EXPECT_THROW(RunScenario(preds, split, scenario, {}, "m", {}), Error);
  preds = {Predict("other", 0, 2, scenario.targets)};
  EXPECT_THROW(RunScenario(preds, split, scenario, {}, "m", {}), Error);
}

}  // namespace
}  // namespace slid::eval
