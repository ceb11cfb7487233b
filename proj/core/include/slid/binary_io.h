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

#ifndef SLID_BINARY_IO_H_
#define SLID_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "slid/error.h"

// Little-endian scalar helpers shared by the binary file formats.
namespace slid::io {

template <typename UInt>
void WriteLe(std::ostream& out, UInt value) {
  char bytes[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes, sizeof(UInt));
}

template <typename UInt>
UInt ReadLe(std::istream& in) {
  unsigned char bytes[sizeof(UInt)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(UInt))) {
    throw Error(ErrorCode::kIo, "unexpected end of binary stream");
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return value;
}

inline void WriteF32(std::ostream& out, float v) {
  WriteLe(out, std::bit_cast<std::uint32_t>(v));
}
inline float ReadF32(std::istream& in) {
  return std::bit_cast<float>(ReadLe<std::uint32_t>(in));
}
inline void WriteF64(std::ostream& out, double v) {
  WriteLe(out, std::bit_cast<std::uint64_t>(v));
}
inline double ReadF64(std::istream& in) {
  return std::bit_cast<double>(ReadLe<std::uint64_t>(in));
}

}  // namespace slid::io

#endif  // SLID_BINARY_IO_H_
