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

#ifndef SLID_UTF8_H_
#define SLID_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace slid {

// Throws Error(kParse) on malformed input.
std::vector<char32_t> DecodeUtf8(std::string_view text);

std::string EncodeUtf8(char32_t codepoint);
std::string EncodeUtf8(const std::vector<char32_t>& codepoints);

}  // namespace slid

#endif  // SLID_UTF8_H_
