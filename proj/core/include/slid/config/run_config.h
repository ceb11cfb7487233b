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

#ifndef SLID_CONFIG_RUN_CONFIG_H_
#define SLID_CONFIG_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "slid/corpus/synth.h"
#include "slid/eval/predict.h"
#include "slid/eval/report.h"
#include "slid/model/acoustic_model.h"
#include "slid/model/language_classifier.h"
#include "slid/model/linear_classifier.h"
#include "slid/train/dataset.h"
#include "slid/train/trainer.h"

namespace slid::config {

// Synthetic corpus settings; each language gets a random bigram chain.
struct SynthConfig {
  std::vector<std::string> languages = {"sa", "sb", "sc"};
  int songs_per_language = 30;
  int artists_per_language = 10;
  double song_duration = 40.0;
  double noise_level = 0.02;
  double concentration = 0.35;
  std::uint64_t seed = 0;
  bool write_audio = false;

  corpus::SynthSpec ToSpec() const;
};

// Whole-pipeline configuration. Sections mirror the modules; every field has
// a documented default (see configs/default.json).
struct RunConfig {
  std::filesystem::path manifest;  // relative paths resolve against the config
  SynthConfig synth;
  train::DatasetConfig dataset;
  model::AcousticConfig acoustic;
  model::ClassifierConfig classifier;
  model::LinearClassifierConfig linear;
  train::TrainConfig train;  // seed and workers mirror the top-level fields
  eval::InferenceConfig inference;
  eval::EvalOptions evaluation;
  std::uint64_t seed = 0;
  int workers = 1;

  // Throws Error(kConfig) naming the offending field.
  void Validate() const;
  // Copies the top-level seed/workers into the sections that use them.
  void Propagate();

  std::string ToJson() const;
  // Parses and validates. Unknown keys and wrongly typed values throw
  // Error(kConfig) with the dotted key path. `base_dir` anchors a relative
  // manifest path.
  static RunConfig FromJson(std::string_view text,
                            const std::filesystem::path& base_dir = {});
  static RunConfig Load(const std::filesystem::path& path);
};

}  // namespace slid::config

#endif  // SLID_CONFIG_RUN_CONFIG_H_
