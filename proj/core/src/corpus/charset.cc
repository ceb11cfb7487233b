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

#include "slid/corpus/charset.h"

#include <set>

#include "slid/error.h"
#include "slid/utf8.h"

namespace slid::corpus {

Charset Charset::Build(std::span<const Segment> train_segments) {
  if (train_segments.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot build a charset from an empty segment set");
  }
  std::set<char32_t> phonemes;
  for (const Segment& seg : train_segments) {
    for (const std::string& word : seg.words) {
      for (char32_t cp : DecodeUtf8(word)) phonemes.insert(cp);
    }
  }
  std::vector<std::string> tokens = {kBlankToken, kSpaceToken,
                                     kInstrumentalToken};
  for (char32_t cp : phonemes) {
    const std::string token = EncodeUtf8(cp);
    if (token == kBlankToken || token == kSpaceToken ||
        token == kInstrumentalToken) {
      continue;
    }
    tokens.push_back(token);
  }
  return FromTokens(std::move(tokens));
}

Charset Charset::FromTokens(std::vector<std::string> tokens) {
  if (tokens.size() < 3 || tokens[0] != kBlankToken ||
      tokens[1] != kSpaceToken || tokens[2] != kInstrumentalToken) {
    throw Error(ErrorCode::kParse,
                "charset must start with blank, space and instrumental tokens");
  }
  Charset cs;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!cs.index_.emplace(tokens[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::kParse, "duplicate charset token '" + tokens[i] +
                                         "'");
    }
  }
  cs.tokens_ = std::move(tokens);
  return cs;
}

std::optional<int> Charset::id(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PhonemeSeq Charset::Encode(std::span<const std::string> words,
                           int* dropped) const {
  PhonemeSeq out;
  int missing = 0;
  for (const std::string& word : words) {
    PhonemeSeq ids;
    for (char32_t cp : DecodeUtf8(word)) {
      const auto found = id(EncodeUtf8(cp));
      if (found && *found > instrumental_id()) {
        ids.push_back(*found);
      } else {
        ++missing;
      }
    }
    if (ids.empty()) continue;
    if (!out.empty()) out.push_back(space_id());
    out.insert(out.end(), ids.begin(), ids.end());
  }
  if (out.empty()) out.push_back(instrumental_id());
  if (dropped != nullptr) *dropped = missing;
  return out;
}

std::string Charset::Decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) out += token(id);
  return out;
}

int Charset::CountWords(std::span<const int> ids) const {
  int words = 0;
  bool in_word = false;
  for (int id : ids) {
    if (id > instrumental_id()) {
      if (!in_word) ++words;
      in_word = true;
    } else {
      in_word = false;
    }
  }
  return words;
}

}  // namespace slid::corpus
