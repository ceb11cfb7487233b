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

#ifndef SLID_EVAL_METRICS_H_
#define SLID_EVAL_METRICS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace slid::eval {

// L x L counts, rows = true class, columns = predicted class. Predictions of
// -1 are abstentions: they count towards the true class's recall
// denominator but land in no column.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes = 0);
  static ConfusionMatrix FromCounts(
      const std::vector<std::vector<std::int64_t>>& counts);

  // Throws Error(kInvalidArgument) for out-of-range classes.
  void Add(int truth, int predicted);

  std::size_t classes() const { return classes_; }
  std::int64_t count(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * classes_ + predicted];
  }
  std::int64_t abstained(std::size_t truth) const { return abstained_[truth]; }
  // Samples of class `truth`, abstentions included.
  std::int64_t row_total(std::size_t truth) const;
  std::int64_t column_total(std::size_t predicted) const;
  std::int64_t total() const;

 private:
  std::size_t classes_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> abstained_;
};

// Mean per-class recall in percent. Throws Error(kInvalidArgument) when a
// class has no sample.
double BalancedAccuracy(const ConfusionMatrix& cm);
// Same, averaged over the classes that have samples; nullopt when none has.
std::optional<double> BalancedAccuracyOverPresent(const ConfusionMatrix& cm);
// Plain accuracy in percent (abstentions are errors).
double Accuracy(const ConfusionMatrix& cm);
// Per-class F1 in percent; 0 when precision + recall = 0.
std::vector<double> F1PerClass(const ConfusionMatrix& cm);
// Unweighted mean of F1PerClass in percent. Throws like BalancedAccuracy.
double MacroF1(const ConfusionMatrix& cm);
// Mean F1 over `classes` only.
double MacroF1Over(const ConfusionMatrix& cm, std::span<const int> classes);

struct SongRecord {
  int truth = 0;
  int predicted = -1;  // -1 = abstention (instrumental verdict)
  bool out_of_domain = false;
};

ConfusionMatrix BuildConfusion(std::span<const SongRecord> records,
                               std::size_t classes);

// A metric over a song list; nullopt when undefined for that list.
using MetricFn =
    std::function<std::optional<double>(std::span<const SongRecord>)>;

// Sample standard deviation of `metric` over `resamples` bootstrap resamples
// of `records` (with replacement, same size). Resamples on which the metric
// is undefined are skipped; fewer than two defined values give 0.
double BootstrapStdError(const MetricFn& metric,
                         std::span<const SongRecord> records, int resamples,
                         std::uint64_t seed);

}  // namespace slid::eval

#endif  // SLID_EVAL_METRICS_H_
