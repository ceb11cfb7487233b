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

#include "slid/corpus/split.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

#include "slid/error.h"

namespace slid::corpus {

void SplitSpec::Validate() const {
  for (double r : {train, val, test}) {
    if (!(r > 0 && r < 1)) {
      throw Error(ErrorCode::kConfig, "split: fractions must lie in (0, 1)");
    }
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kConfig, "split: fractions must sum to 1");
  }
}

CorpusSplit SplitCorpus(const std::vector<Song>& songs, const SplitSpec& spec) {
  spec.Validate();
  if (songs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot split an empty corpus");
  }
  // Per-language targets, ordered (train, val, test).
  std::map<std::string, int> per_language;
  for (const Song& s : songs) ++per_language[s.language];
  std::map<std::string, std::array<int, 3>> target;
  for (const auto& [lang, n] : per_language) {
    const int val = static_cast<int>(std::lround(n * spec.val));
    const int test = static_cast<int>(std::lround(n * spec.test));
    target[lang] = {n - val - test, val, test};
  }

  std::map<std::string, std::vector<std::size_t>> by_artist;
  for (std::size_t i = 0; i < songs.size(); ++i) {
    by_artist[songs[i].artist_id].push_back(i);
  }
  std::vector<std::string> artists;
  for (const auto& [artist, idx] : by_artist) artists.push_back(artist);
  std::mt19937_64 rng(spec.seed);
  std::shuffle(artists.begin(), artists.end(), rng);
  std::stable_sort(artists.begin(), artists.end(),
                   [&](const std::string& a, const std::string& b) {
                     return by_artist[a].size() > by_artist[b].size();
                   });

  std::map<std::string, std::array<int, 3>> assigned;
  CorpusSplit out;
  std::array<std::vector<Song>*, 3> buckets = {&out.train, &out.val, &out.test};
  // Ties favour val, then test, then train so small splits fill first.
  constexpr std::array<int, 3> kTieOrder = {1, 2, 0};
  for (const std::string& artist : artists) {
    const auto& idx = by_artist[artist];
    std::map<std::string, int> langs;
    for (std::size_t i : idx) ++langs[songs[i].language];
    int best = -1;
    double best_deficit = -INFINITY;
    for (int split : kTieOrder) {
      double deficit = 0.0;
      for (const auto& [lang, count] : langs) {
        deficit += target[lang][split] - assigned[lang][split];
      }
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = split;
      }
    }
    for (const auto& [lang, count] : langs) assigned[lang][best] += count;
    for (std::size_t i : idx) buckets[best]->push_back(songs[i]);
  }

  static constexpr std::array<const char*, 3> kNames = {"train", "val", "test"};
  for (const auto& [lang, counts] : assigned) {
    for (int split = 0; split < 3; ++split) {
      if (std::abs(counts[split] - target[lang][split]) > 1) {
        out.warnings.push_back(
            "language " + lang + ": " + kNames[split] + " split has " +
            std::to_string(counts[split]) + " songs, target " +
            std::to_string(target[lang][split]) +
            " (artist structure prevents an exact split)");
      }
    }
  }
  // Keep manifest order within each split.
  auto by_position = [&](std::vector<Song>& v) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < songs.size(); ++i) pos[songs[i].id] = i;
    std::sort(v.begin(), v.end(), [&](const Song& a, const Song& b) {
      return pos[a.id] < pos[b.id];
    });
  };
  by_position(out.train);
  by_position(out.val);
  by_position(out.test);
  return out;
}

}  // namespace slid::corpus
