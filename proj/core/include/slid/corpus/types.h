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

#ifndef SLID_CORPUS_TYPES_H_
#define SLID_CORPUS_TYPES_H_

#include <filesystem>
#include <string>
#include <vector>

namespace slid::corpus {

// A word of the lyrics: its IPA transcription and time span in seconds.
struct Word {
  std::string ipa;
  double start = 0.0;
  double end = 0.0;

  bool operator==(const Word&) const = default;
};

struct Song {
  std::string id;
  std::string artist_id;
  std::string language;
  // 16 kHz mono .wav file or a feature cache file.
  std::filesystem::path source;
  double duration = 0.0;  // seconds
  std::vector<Word> words;

  bool operator==(const Song&) const = default;
};

struct Corpus {
  std::vector<Song> songs;
  std::vector<std::string> warnings;
};

enum class SegmentKind { kLanguage, kInstrumental, kAmbiguous };

struct SegmentLabel {
  SegmentKind kind = SegmentKind::kInstrumental;
  std::string language;  // set only for kLanguage

  bool operator==(const SegmentLabel&) const = default;
};

std::string SegmentLabelName(const SegmentLabel& label);
SegmentLabel ParseSegmentLabel(const std::string& text);

// A fixed-length excerpt of a song. `words` holds the IPA of the words whose
// midpoint lies inside [start, end), in time order.
struct Segment {
  std::string song_id;
  double start = 0.0;
  double end = 0.0;
  std::vector<std::string> words;
  SegmentLabel label;

  double length() const { return end - start; }
  bool operator==(const Segment&) const = default;
};

}  // namespace slid::corpus

#endif  // SLID_CORPUS_TYPES_H_
