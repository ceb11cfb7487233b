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

#ifndef SLID_CORPUS_SEGMENTER_H_
#define SLID_CORPUS_SEGMENTER_H_

#include <vector>

#include "slid/corpus/types.h"

namespace slid::corpus {

struct SegmentationConfig {
  double length = 20.0;  // seconds
  double overlap = 0.5;  // fraction of `length` shared by consecutive segments

  double hop() const { return length * (1.0 - overlap); }
  void Validate() const;
};

// Splits a song into fixed-length windows starting every hop() seconds while
// they fit. When audio remains uncovered and at least hop() seconds remain
// after the next would-be start, one end-aligned window is appended. Songs
// shorter than one window yield a single segment covering the whole song.
// Words are assigned to every segment containing their midpoint. Labels are
// left as instrumental; see LabelSegment().
std::vector<Segment> SegmentSong(const Song& song,
                                 const SegmentationConfig& config);

}  // namespace slid::corpus

#endif  // SLID_CORPUS_SEGMENTER_H_
