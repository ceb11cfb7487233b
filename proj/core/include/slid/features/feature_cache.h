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

#ifndef SLID_FEATURES_FEATURE_CACHE_H_
#define SLID_FEATURES_FEATURE_CACHE_H_

#include <cstdint>
#include <filesystem>

#include "slid/features/features.h"

namespace slid::features {

// Binary cache layout, little-endian:
//   char[8]  magic "SLIDFEAT"
//   uint32   version (1)
//   uint32   N (rows)
//   uint32   F (cols)
//   float64  frame_rate
//   float32  data[N * F], row-major
// Posteriorgram caches reuse the layout with F = |C|.
inline constexpr std::uint32_t kFeatureCacheVersion = 1;

struct FeatureCacheHeader {
  std::uint32_t version = kFeatureCacheVersion;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  double frame_rate = 0.0;
};

void WriteFeatureCache(const std::filesystem::path& path,
                       const FeatureMatrix& features);
FeatureMatrix ReadFeatureCache(const std::filesystem::path& path);
FeatureCacheHeader ReadFeatureCacheHeader(const std::filesystem::path& path);

}  // namespace slid::features

#endif  // SLID_FEATURES_FEATURE_CACHE_H_
