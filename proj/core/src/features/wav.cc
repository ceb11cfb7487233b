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

#include "slid/features/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

#include "slid/binary_io.h"
#include "slid/error.h"

namespace slid::features {
namespace {

struct WavLayout {
  WaveInfo info;
  int bits = 0;
  int format = 0;  // 1 = PCM, 3 = IEEE float
  std::streamoff data_offset = 0;
};

WavLayout ParseLayout(std::istream& in, const std::filesystem::path& path) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kParse, path.string() + ": " + why);
  };
  char tag[4];
  if (!in.read(tag, 4) || std::string(tag, 4) != "RIFF") fail("missing RIFF");
  io::ReadLe<std::uint32_t>(in);
  if (!in.read(tag, 4) || std::string(tag, 4) != "WAVE") fail("missing WAVE");
  WavLayout layout;
  bool have_fmt = false;
  while (in.read(tag, 4)) {
    const std::string id(tag, 4);
    const auto size = io::ReadLe<std::uint32_t>(in);
    if (id == "fmt ") {
      layout.format = io::ReadLe<std::uint16_t>(in);
      layout.info.channels = io::ReadLe<std::uint16_t>(in);
      layout.info.sample_rate = static_cast<int>(io::ReadLe<std::uint32_t>(in));
      io::ReadLe<std::uint32_t>(in);
      io::ReadLe<std::uint16_t>(in);
      layout.bits = io::ReadLe<std::uint16_t>(in);
      in.seekg(static_cast<std::streamoff>(size) - 16, std::ios::cur);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail("data chunk before fmt chunk");
      if (layout.info.channels != 1) fail("only mono audio is supported");
      if (!((layout.format == 1 && layout.bits == 16) ||
            (layout.format == 3 && layout.bits == 32))) {
        fail("only 16-bit PCM or 32-bit float samples are supported");
      }
      layout.data_offset = in.tellg();
      layout.info.num_samples = size / (layout.bits / 8);
      return layout;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  fail("missing data chunk");
  return layout;
}

}  // namespace

WaveInfo ReadWavInfo(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  return ParseLayout(in, path).info;
}

std::vector<double> ReadWav(const std::filesystem::path& path,
                            int* sample_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  const WavLayout layout = ParseLayout(in, path);
  in.seekg(layout.data_offset);
  std::vector<double> wave(layout.info.num_samples);
  for (double& s : wave) {
    if (layout.format == 1) {
      s = static_cast<std::int16_t>(io::ReadLe<std::uint16_t>(in)) / 32768.0;
    } else {
      s = io::ReadF32(in);
    }
  }
  if (sample_rate != nullptr) *sample_rate = layout.info.sample_rate;
  return wave;
}

void WriteWav(const std::filesystem::path& path, std::span<const double> wave,
              int sample_rate) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const auto data_bytes = static_cast<std::uint32_t>(wave.size() * 2);
  out.write("RIFF", 4);
  io::WriteLe<std::uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  io::WriteLe<std::uint32_t>(out, 16);
  io::WriteLe<std::uint16_t>(out, 1);
  io::WriteLe<std::uint16_t>(out, 1);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate));
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate * 2));
  io::WriteLe<std::uint16_t>(out, 2);
  io::WriteLe<std::uint16_t>(out, 16);
  out.write("data", 4);
  io::WriteLe<std::uint32_t>(out, data_bytes);
  for (double s : wave) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
    io::WriteLe<std::uint16_t>(out, static_cast<std::uint16_t>(q));
  }
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace slid::features
