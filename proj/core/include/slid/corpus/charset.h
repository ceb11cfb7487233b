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

#ifndef SLID_CORPUS_CHARSET_H_
#define SLID_CORPUS_CHARSET_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slid/corpus/types.h"

namespace slid::corpus {

// Sequence of charset ids, never containing the blank id.
using PhonemeSeq = std::vector<int>;

inline const std::string kBlankToken = "\xCE\xB5";  // "ε"
inline const std::string kSpaceToken = " ";
inline const std::string kInstrumentalToken = "I";

// Ordered token inventory: blank (id 0), space (1), instrumental "I" (2), then
// every IPA codepoint seen in training transcriptions, sorted by codepoint.
class Charset {
 public:
  // Throws Error(kInvalidArgument) for an empty segment set.
  static Charset Build(std::span<const Segment> train_segments);
  // Rebuilds from a serialized token list; validates the reserved prefix.
  static Charset FromTokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  int blank_id() const { return 0; }
  int space_id() const { return 1; }
  int instrumental_id() const { return 2; }

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int id) const { return tokens_.at(id); }
  std::optional<int> id(const std::string& token) const;

  // Words -> ids joined by the space token. Codepoints absent from the
  // charset are dropped and counted in `dropped`. An empty word list maps
  // to ["I"].
  PhonemeSeq Encode(std::span<const std::string> words,
                    int* dropped = nullptr) const;

  // Ids -> text; the space token becomes ' '.
  std::string Decode(std::span<const int> ids) const;

  // Splits decoded ids on the space token and counts non-empty words made of
  // phoneme tokens.
  int CountWords(std::span<const int> ids) const;

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> index_;
};

}  // namespace slid::corpus

#endif  // SLID_CORPUS_CHARSET_H_
