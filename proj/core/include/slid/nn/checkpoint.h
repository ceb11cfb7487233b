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

#ifndef SLID_NN_CHECKPOINT_H_
#define SLID_NN_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slid/nn/tensor.h"

namespace slid::nn {

inline constexpr int kCheckpointVersion = 1;

// Versioned model container. On disk: a UTF-8 text header
//
//   SLID-CHECKPOINT 1
//   kind <acoustic|classifier|linear>
//   fingerprint <16 hex digits>
//   config <single-line JSON>
//   charset <single-line JSON array of tokens>
//   tensor <name> <rank> <dim>...
//   ...
//   data
//
// followed by every tensor's values as little-endian float32, in header order.
struct Checkpoint {
  std::string kind;
  std::string config_json = "{}";
  std::string fingerprint;
  std::vector<std::string> charset;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

void WriteCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

// FNV-1a 64-bit hash as 16 lowercase hex digits.
std::string Fingerprint(std::string_view text);

// Copies parameter values into named tensors.
std::vector<std::pair<std::string, Tensor>> ExportParameters(
    const ParameterList& params);
// Loads values by name; throws Error(kShapeMismatch) for a missing tensor or
// a shape disagreement.
void ImportParameters(const std::vector<std::pair<std::string, Tensor>>& tensors,
                      const ParameterList& params);

// Rounds every parameter value through float32, matching what a
// checkpoint round trip stores.
void RoundToFloat(const ParameterList& params);

}  // namespace slid::nn

#endif  // SLID_NN_CHECKPOINT_H_
