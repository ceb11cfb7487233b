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

#ifndef SLID_PIPELINE_H_
#define SLID_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slid/config/run_config.h"
#include "slid/corpus/charset.h"
#include "slid/eval/predict.h"
#include "slid/eval/report.h"
#include "slid/model/acoustic_model.h"
#include "slid/model/language_classifier.h"
#include "slid/model/linear_classifier.h"
#include "slid/train/dataset.h"
#include "slid/train/trainer.h"

namespace slid::pipeline {

enum class Mode { kTwoStep, kJoint, kE2e, kStatistics };

// Throws Error(kConfig) for an unknown name.
Mode ParseMode(const std::string& name);
std::string ModeName(Mode mode);

// Everything needed to classify songs after training.
struct TrainedModels {
  Mode mode = Mode::kTwoStep;
  std::vector<std::string> classes;
  corpus::Charset charset;
  std::set<std::string> train_languages;
  model::AcousticModel am;
  std::optional<model::LanguageClassifier> lid;
  std::optional<model::LinearClassifier> linear;
  std::vector<train::EpochLog> log;
};

// Manifest -> split, labeled, encoded dataset.
train::Dataset LoadDataset(const config::RunConfig& config);

// Trains the models of `mode` from scratch. Parameters are rounded to single
// precision at the end so the in-memory models equal their checkpoints.
TrainedModels Train(const train::Dataset& data, const config::RunConfig& config,
                    Mode mode, const train::LogSink& sink = {});

// Statistics variant on top of an already trained acoustic model.
TrainedModels TrainStatisticsOn(const model::AcousticModel& am,
                                const train::Dataset& data,
                                const config::RunConfig& config);

// Inference settings implied by the mode (E2E has no meaningful blank
// column, so cleaning and the decoded-word filter are off).
eval::InferenceConfig InferenceFor(const TrainedModels& models,
                                   const config::RunConfig& config);

std::vector<eval::SongPrediction> Predict(const TrainedModels& models,
                                          const train::SplitData& split,
                                          const config::RunConfig& config);

// Test-split report.
eval::EvalReport Evaluate(const TrainedModels& models,
                          const train::Dataset& data,
                          const config::RunConfig& config);

// Run directory layout: config.json, model.json, am.ckpt and lid.ckpt or
// linear.ckpt.
void SaveModels(const std::filesystem::path& dir, const TrainedModels& models,
                const config::RunConfig& config);
// Restores models saved by SaveModels together with their config. Throws
// Error(kConfig) when the checkpoints were written under another config.
TrainedModels LoadModels(const std::filesystem::path& dir,
                         config::RunConfig* config);

}  // namespace slid::pipeline

#endif  // SLID_PIPELINE_H_
