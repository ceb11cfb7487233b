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

#include "slid/utf8.h"

#include <gtest/gtest.h>

#include "slid/error.h"

namespace slid {
namespace {

TEST(Utf8Test, RoundTripsMixedWidthCodepoints) {
  const std::vector<char32_t> cps = {U'a', U'ɑ', U'ʃ', U'€',
                                     U'\U0001F3B5'};
  const std::string text = EncodeUtf8(cps);
  EXPECT_EQ(text.size(), 1u + 2u + 2u + 3u + 4u);
  EXPECT_EQ(DecodeUtf8(text), cps);
}

TEST(Utf8Test, DecodesIpaString) {
  const auto cps = DecodeUtf8("\xCA\x83\xC9\x91");  // "ʃɑ"
  ASSERT_EQ(cps.size(), 2u);
  EXPECT_EQ(cps[0], U'ʃ');
  EXPECT_EQ(cps[1], U'ɑ');
}

TEST(Utf8Test, RejectsTruncatedSequence) {
  EXPECT_THROW(DecodeUtf8("\xC9"), Error);
}

TEST(Utf8Test, RejectsStrayContinuationByte) {
  EXPECT_THROW(DecodeUtf8("a\x80"), Error);
}

}  // namespace
}  // namespace slid
