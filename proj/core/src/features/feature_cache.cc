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

#include "slid/features/feature_cache.h"

#include <array>
#include <fstream>
#include <string>

#include "slid/binary_io.h"
#include "slid/error.h"

namespace slid::features {
namespace {

constexpr std::array<char, 8> kMagic = {'S', 'L', 'I', 'D', 'F', 'E', 'A', 'T'};

FeatureCacheHeader ReadHeader(std::istream& in,
                              const std::filesystem::path& path) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorCode::kParse, path.string() + ": not a feature cache file");
  }
  FeatureCacheHeader h;
  h.version = io::ReadLe<std::uint32_t>(in);
  if (h.version != kFeatureCacheVersion) {
    throw Error(ErrorCode::kParse, path.string() +
                                       ": unsupported feature cache version " +
                                       std::to_string(h.version));
  }
  h.rows = io::ReadLe<std::uint32_t>(in);
  h.cols = io::ReadLe<std::uint32_t>(in);
  h.frame_rate = io::ReadF64(in);
  return h;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

void WriteFeatureCache(const std::filesystem::path& path,
                       const FeatureMatrix& features) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  io::WriteLe<std::uint32_t>(out, kFeatureCacheVersion);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(features.rows()));
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(features.cols()));
  io::WriteF64(out, features.frame_rate());
  for (float v : features.data()) io::WriteF32(out, v);
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

FeatureMatrix ReadFeatureCache(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  const FeatureCacheHeader h = ReadHeader(in, path);
  FeatureMatrix m(h.rows, h.cols, h.frame_rate);
  for (float& v : m.data()) v = io::ReadF32(in);
  return m;
}

FeatureCacheHeader ReadFeatureCacheHeader(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  return ReadHeader(in, path);
}

}  // namespace slid::features
