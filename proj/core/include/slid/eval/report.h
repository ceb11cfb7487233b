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

#ifndef SLID_EVAL_REPORT_H_
#define SLID_EVAL_REPORT_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slid/eval/metrics.h"
#include "slid/eval/predict.h"
#include "slid/train/dataset.h"

namespace slid::eval {

struct EvalOptions {
  int resamples = 1000;
  std::uint64_t seed = 0;
};

struct ValueWithError {
  double value = 0.0;
  double se = 0.0;
};

struct EvalReport {
  std::string scenario;  // closed | open
  std::string mode;      // training strategy that produced the models
  std::vector<std::string> classes;
  int songs = 0;
  int abstentions = 0;  // instrumental verdicts
  ValueWithError balanced_accuracy;
  ValueWithError macro_f1;
  std::vector<ValueWithError> f1;  // per class
  ConfusionMatrix confusion;

  // Open set only.
  std::optional<ValueWithError> target_macro_f1;
  std::optional<ValueWithError> others_f1;
  // Share of "others" songs predicted as "others", split by whether the
  // song's language occurred in training (in-domain) or not.
  std::optional<double> others_in_domain_accuracy;
  std::optional<double> others_out_of_domain_accuracy;
  int others_in_domain_songs = 0;
  int others_out_of_domain_songs = 0;

  std::string ToJson() const;
  // Aligned human-readable table.
  std::string ToTable() const;
};

// Song-level metrics of `predictions` against the split's song labels.
// Throws Error(kInvalidArgument) when predictions and songs disagree or a
// prediction uses a different label space.
EvalReport RunScenario(const std::vector<SongPrediction>& predictions,
                       const train::SplitData& split,
                       const train::Scenario& scenario,
                       const std::set<std::string>& train_languages,
                       const std::string& mode, const EvalOptions& options);

}  // namespace slid::eval

#endif  // SLID_EVAL_REPORT_H_
