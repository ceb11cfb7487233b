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

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "slid/error.h"

namespace slid::eval {

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : classes_(classes),
      counts_(classes * classes, 0),
      abstained_(classes, 0) {}

ConfusionMatrix ConfusionMatrix::FromCounts(
    const std::vector<std::vector<std::int64_t>>& counts) {
  ConfusionMatrix cm(counts.size());
  for (std::size_t t = 0; t < counts.size(); ++t) {
    if (counts[t].size() != counts.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "confusion matrix: counts must be square");
    }
    for (std::size_t p = 0; p < counts.size(); ++p) {
      if (counts[t][p] < 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "confusion matrix: negative count");
      }
      cm.counts_[t * cm.classes_ + p] = counts[t][p];
    }
  }
  return cm;
}

void ConfusionMatrix::Add(int truth, int predicted) {
  const auto n = static_cast<int>(classes_);
  if (truth < 0 || truth >= n || predicted < -1 || predicted >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "confusion matrix: class index out of range");
  }
  if (predicted < 0) {
    ++abstained_[static_cast<std::size_t>(truth)];
  } else {
    ++counts_[static_cast<std::size_t>(truth) * classes_ +
              static_cast<std::size_t>(predicted)];
  }
}

std::int64_t ConfusionMatrix::row_total(std::size_t truth) const {
  std::int64_t sum = abstained_[truth];
  for (std::size_t p = 0; p < classes_; ++p) sum += count(truth, p);
  return sum;
}

std::int64_t ConfusionMatrix::column_total(std::size_t predicted) const {
  std::int64_t sum = 0;
  for (std::size_t t = 0; t < classes_; ++t) sum += count(t, predicted);
  return sum;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t sum = 0;
  for (std::size_t t = 0; t < classes_; ++t) sum += row_total(t);
  return sum;
}

namespace {

void RequireAllRows(const ConfusionMatrix& cm) {
  if (cm.classes() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "metrics: empty label space");
  }
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    if (cm.row_total(c) == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "metrics: class " + std::to_string(c) + " has no samples");
    }
  }
}

double Recall(const ConfusionMatrix& cm, std::size_t c) {
  return static_cast<double>(cm.count(c, c)) /
         static_cast<double>(cm.row_total(c));
}

}  // namespace

double BalancedAccuracy(const ConfusionMatrix& cm) {
  RequireAllRows(cm);
  return *BalancedAccuracyOverPresent(cm);
}

std::optional<double> BalancedAccuracyOverPresent(const ConfusionMatrix& cm) {
  double sum = 0.0;
  int present = 0;
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    if (cm.row_total(c) == 0) continue;
    sum += Recall(cm, c);
    ++present;
  }
  if (present == 0) return std::nullopt;
  return 100.0 * sum / present;
}

double Accuracy(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total == 0) {
    throw Error(ErrorCode::kInvalidArgument, "metrics: no samples");
  }
  std::int64_t correct = 0;
  for (std::size_t c = 0; c < cm.classes(); ++c) correct += cm.count(c, c);
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<double> F1PerClass(const ConfusionMatrix& cm) {
  std::vector<double> f1(cm.classes(), 0.0);
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const auto tp = static_cast<double>(cm.count(c, c));
    const auto predicted = static_cast<double>(cm.column_total(c));
    const auto actual = static_cast<double>(cm.row_total(c));
    const double precision = predicted > 0 ? tp / predicted : 0.0;
    const double recall = actual > 0 ? tp / actual : 0.0;
    if (precision + recall > 0) {
      f1[c] = 100.0 * 2.0 * precision * recall / (precision + recall);
    }
  }
  return f1;
}

double MacroF1(const ConfusionMatrix& cm) {
  RequireAllRows(cm);
  const auto f1 = F1PerClass(cm);
  return std::accumulate(f1.begin(), f1.end(), 0.0) /
         static_cast<double>(f1.size());
}

double MacroF1Over(const ConfusionMatrix& cm, std::span<const int> classes) {
  if (classes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "metrics: empty class subset");
  }
  const auto f1 = F1PerClass(cm);
  double sum = 0.0;
  for (int c : classes) {
    if (c < 0 || static_cast<std::size_t>(c) >= f1.size()) {
      throw Error(ErrorCode::kInvalidArgument, "metrics: class out of range");
    }
    sum += f1[static_cast<std::size_t>(c)];
  }
  return sum / static_cast<double>(classes.size());
}

ConfusionMatrix BuildConfusion(std::span<const SongRecord> records,
                               std::size_t classes) {
  ConfusionMatrix cm(classes);
  for (const auto& r : records) cm.Add(r.truth, r.predicted);
  return cm;
}

double BootstrapStdError(const MetricFn& metric,
                         std::span<const SongRecord> records, int resamples,
                         std::uint64_t seed) {
  if (records.empty() || resamples < 2) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, records.size() - 1);
  std::vector<SongRecord> sample(records.size());
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    for (auto& s : sample) s = records[pick(rng)];
    if (auto v = metric(sample)) values.push_back(*v);
  }
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace slid::eval
