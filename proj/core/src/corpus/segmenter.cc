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

#include "slid/corpus/segmenter.h"

#include <string>

#include "slid/error.h"

namespace slid::corpus {
namespace {

constexpr double kEps = 1e-9;

Segment MakeSegment(const Song& song, double start, double end) {
  Segment seg;
  seg.song_id = song.id;
  seg.start = start;
  seg.end = end;
  for (const Word& w : song.words) {
    const double mid = 0.5 * (w.start + w.end);
    if (mid >= start - kEps && mid < end - kEps) seg.words.push_back(w.ipa);
  }
  return seg;
}

}  // namespace

std::string SegmentLabelName(const SegmentLabel& label) {
  switch (label.kind) {
    case SegmentKind::kInstrumental: return "instrumental";
    case SegmentKind::kAmbiguous: return "ambiguous";
    case SegmentKind::kLanguage: return label.language;
  }
  return "instrumental";
}

SegmentLabel ParseSegmentLabel(const std::string& text) {
  if (text == "instrumental") return {SegmentKind::kInstrumental, ""};
  if (text == "ambiguous") return {SegmentKind::kAmbiguous, ""};
  if (text.empty()) {
    throw Error(ErrorCode::kParse, "empty segment label");
  }
  return {SegmentKind::kLanguage, text};
}

void SegmentationConfig::Validate() const {
  if (!(length > 0)) {
    throw Error(ErrorCode::kConfig, "segmentation: length must be positive");
  }
  if (!(overlap >= 0 && overlap < 1)) {
    throw Error(ErrorCode::kConfig, "segmentation: overlap must be in [0, 1)");
  }
}

std::vector<Segment> SegmentSong(const Song& song,
                                 const SegmentationConfig& config) {
  config.Validate();
  if (!(song.duration > 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "song " + song.id + " has non-positive duration");
  }
  std::vector<Segment> out;
  const double len = config.length;
  const double hop = config.hop();
  if (song.duration < len - kEps) {
    out.push_back(MakeSegment(song, 0.0, song.duration));
    return out;
  }
  // Integer stepping keeps starts exact multiples of the hop.
  int k = 0;
  for (; k * hop + len <= song.duration + kEps; ++k) {
    out.push_back(MakeSegment(song, k * hop, k * hop + len));
  }
  const double last_end = (k - 1) * hop + len;
  const double leftover = song.duration - k * hop;
  if (song.duration - last_end > kEps && leftover >= hop - kEps) {
    out.push_back(MakeSegment(song, song.duration - len, song.duration));
  }
  return out;
}

}  // namespace slid::corpus
