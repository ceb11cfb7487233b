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

#ifndef SLID_FEATURES_WAV_H_
#define SLID_FEATURES_WAV_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace slid::features {

struct WaveInfo {
  int sample_rate = 0;
  int channels = 0;
  std::size_t num_samples = 0;  // per channel
};

// Reads a mono RIFF/WAVE file with 16-bit PCM or 32-bit float samples,
// returned in [-1, 1].
std::vector<double> ReadWav(const std::filesystem::path& path,
                            int* sample_rate = nullptr);
WaveInfo ReadWavInfo(const std::filesystem::path& path);

// Writes 16-bit PCM mono, clipping to [-1, 1].
void WriteWav(const std::filesystem::path& path, std::span<const double> wave,
              int sample_rate);

}  // namespace slid::features

#endif  // SLID_FEATURES_WAV_H_
