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

#ifndef SLID_CORPUS_MANIFEST_H_
#define SLID_CORPUS_MANIFEST_H_

#include <filesystem>

#include "slid/corpus/types.h"

namespace slid::corpus {

// Line-delimited UTF-8 manifest, one song per line:
//   id \t artist_id \t language \t path \t word|start|end;word|start|end;...
// Blank lines and lines starting with '#' are skipped. Relative paths are
// resolved against the manifest's directory. Durations come from the
// referenced file header (.wav or feature cache).
Corpus LoadManifest(const std::filesystem::path& path);

// Paths are written relative to the manifest directory when possible.
void WriteManifest(const std::filesystem::path& path, const Corpus& corpus);

// Duration in seconds of a .wav file or feature cache.
double SourceDuration(const std::filesystem::path& source);

}  // namespace slid::corpus

#endif  // SLID_CORPUS_MANIFEST_H_
