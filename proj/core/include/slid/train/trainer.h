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

#ifndef SLID_TRAIN_TRAINER_H_
#define SLID_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "slid/model/acoustic_model.h"
#include "slid/model/language_classifier.h"
#include "slid/model/linear_classifier.h"
#include "slid/train/dataset.h"

namespace slid::train {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 32;
  double lambda_phase1 = 0.1;
  double lambda_phase2 = 100.0;
  int patience = 5;
  int max_epochs = 100;
  std::uint64_t seed = 0;
  int workers = 1;
  double blank_threshold = model::kDefaultBlankThreshold;

  void Validate() const;
  bool operator==(const TrainConfig&) const = default;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One line of the training log. Unused metrics stay NaN and print as "nan".
struct EpochLog {
  std::string phase;
  int epoch = 0;
  double lambda = 0.0;
  double train_ctc = kNaN;
  double train_lid = kNaN;
  double val_ctc = kNaN;
  double val_lid = kNaN;
  double val_joint = kNaN;
  double val_bacc = kNaN;
  double val_per = kNaN;
  int unalignable = 0;
  double wall_time = 0.0;  // seconds since the phase started

  std::string ToLine() const;
};

using LogSink = std::function<void(const EpochLog&)>;

struct TrainResult {
  std::vector<EpochLog> log;
  int best_epoch = 0;
};

// Loss terms of one batch: total = ctc_weight * ctc + lambda * lid, where
// both terms are sums over the batch divided by the batch size.
struct LossTerms {
  double ctc = 0.0;
  double lid = 0.0;
  double total = 0.0;
  int items = 0;
  int unalignable = 0;
  int lid_items = 0;
};

struct Objective {
  double ctc_weight = 1.0;
  double lambda = 0.0;
  // Remove frames with p(blank) > blank_threshold before the classifier;
  // gradients reach only the retained frames.
  bool clean = true;
  double blank_threshold = model::kDefaultBlankThreshold;
  std::span<const double> class_weights;
};

// Forward pass of the joint loss on a batch and, when `backward` is
// set, accumulation of d(total)/d(params) into both models' gradients.
// `lid` may be null for a pure CTC objective. Dropout masks for item i are
// drawn from a generator seeded by `item_seeds[i]` when `train` is set.
LossTerms JointLossOnBatch(model::AcousticModel& am,
                           model::LanguageClassifier* lid,
                           std::span<const Example* const> batch,
                           const Objective& objective, bool train,
                           bool backward,
                           std::span<const std::uint64_t> item_seeds = {});

// Minimises mean CTC loss; early stops on validation CTC loss and restores
// the best epoch. Throws Error(kDivergence) on a non-finite loss.
TrainResult TrainAcoustic(model::AcousticModel& am,
                          const std::vector<Example>& train,
                          const std::vector<Example>& val,
                          const TrainConfig& config, const LogSink& sink = {});

// Trains the classifier on cleaned posteriorgrams of a frozen acoustic
// model; early stops on validation segment balanced accuracy.
TrainResult TrainLid(model::LanguageClassifier& lid, model::AcousticModel& am,
                     const std::vector<Example>& train,
                     const std::vector<Example>& val,
                     std::span<const double> class_weights,
                     const TrainConfig& config, const LogSink& sink = {});

// Joint training: phase 1 with lambda_phase1 until early stop on the
// validation joint loss, then phase 2 with lambda_phase2 until early stop on
// validation balanced accuracy. `ctc_weight` 0 gives the E2E variant, which
// also disables posteriorgram cleaning.
TrainResult TrainJoint(model::AcousticModel& am, model::LanguageClassifier& lid,
                       const std::vector<Example>& train,
                       const std::vector<Example>& val,
                       std::span<const double> class_weights,
                       const TrainConfig& config, double ctc_weight,
                       const LogSink& sink = {});

// Eval-mode posteriorgrams of `examples`, computed with `workers` threads.
std::vector<nn::Tensor> ComputePosteriorgrams(
    const model::AcousticModel& am, std::span<const Example* const> examples,
    int workers);

// Stats-pooled, cleaned posteriorgrams of every training song, then a linear
// classifier on them. Songs without retained frames are skipped.
model::LinearClassifier TrainStatistics(
    const model::AcousticModel& am, const SplitData& train, int num_classes,
    const model::LinearClassifierConfig& linear, const TrainConfig& config);

// Greedy-decoding phoneme error rate in percent over the non-instrumental
// examples (space and instrumental tokens ignored on both sides).
double PhonemeErrorRate(const model::AcousticModel& am,
                        std::span<const Example* const> examples,
                        int workers);

// Batches of example indices sharing a frame count, shuffled by `rng`; every
// index appears exactly once.
std::vector<std::vector<std::size_t>> MakeBatches(
    const std::vector<Example>& examples, int batch_size, std::uint64_t seed);

std::uint64_t ItemSeed(std::uint64_t seed, int epoch, std::size_t item);

}  // namespace slid::train

#endif  // SLID_TRAIN_TRAINER_H_
