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

#ifndef SLID_CORPUS_SPLIT_H_
#define SLID_CORPUS_SPLIT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "slid/corpus/types.h"

namespace slid::corpus {

struct SplitSpec {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct CorpusSplit {
  std::vector<Song> train;
  std::vector<Song> val;
  std::vector<Song> test;
  std::vector<std::string> warnings;
};

// Language-wise, artist-aware split. Every artist lands in exactly one split;
// per-language song counts track round(n * val) and round(n * test) targets.
// Artists are visited in a seeded shuffle (largest first) and each goes to
// the split with the largest remaining deficit over its songs' languages.
// Throws Error(kInvalidArgument) for an empty corpus.
CorpusSplit SplitCorpus(const std::vector<Song>& songs, const SplitSpec& spec);

}  // namespace slid::corpus

#endif  // SLID_CORPUS_SPLIT_H_
