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

#include "slid/corpus/manifest.h"

#include <charconv>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slid/error.h"
#include "slid/features/feature_cache.h"
#include "slid/features/wav.h"

namespace slid::corpus {
namespace {

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = text.find(sep, begin);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(begin));
      return parts;
    }
    parts.push_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

[[noreturn]] void ParseFail(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kParse,
              "manifest line " + std::to_string(line) + ": " + why);
}

double ParseSeconds(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    ParseFail(line, "invalid time '" + std::string(text) + "'");
  }
  return value;
}

std::string FormatSeconds(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<Word> ParseWords(std::string_view field, std::size_t line) {
  std::vector<Word> words;
  if (field.empty()) return words;
  for (std::string_view item : Split(field, ';')) {
    if (item.empty()) continue;
    const auto parts = Split(item, '|');
    if (parts.size() != 3 || parts[0].empty()) {
      ParseFail(line, "word entries must be 'ipa|start|end', got '" +
                          std::string(item) + "'");
    }
    words.push_back({std::string(parts[0]), ParseSeconds(parts[1], line),
                     ParseSeconds(parts[2], line)});
  }
  return words;
}

void ValidateWords(const Song& song, std::size_t line) {
  constexpr double kSlack = 1e-6;
  double previous_start = 0.0;
  for (const Word& w : song.words) {
    if (w.start < 0 || w.end < w.start) {
      ParseFail(line, "song " + song.id + ": invalid interval for word '" +
                          w.ipa + "'");
    }
    if (w.start < previous_start) {
      ParseFail(line, "song " + song.id + ": word start times decrease");
    }
    if (w.end > song.duration + kSlack) {
      ParseFail(line, "song " + song.id + ": word '" + w.ipa +
                          "' ends after the audio (" +
                          FormatSeconds(song.duration) + " s)");
    }
    previous_start = w.start;
  }
}

}  // namespace

double SourceDuration(const std::filesystem::path& source) {
  if (source.extension() == ".wav") {
    const auto info = features::ReadWavInfo(source);
    if (info.sample_rate <= 0) {
      throw Error(ErrorCode::kParse, source.string() + ": invalid sample rate");
    }
    return static_cast<double>(info.num_samples) / info.sample_rate;
  }
  // Feature caches are framed with 50% overlap: N frames cover N + 1 hops.
  const auto header = features::ReadFeatureCacheHeader(source);
  if (header.frame_rate <= 0) {
    throw Error(ErrorCode::kParse, source.string() + ": invalid frame rate");
  }
  return (header.rows + 1) / header.frame_rate;
}

Corpus LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open manifest " + path.string());
  }
  const std::filesystem::path base = path.parent_path();
  Corpus corpus;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw.front() == '#') continue;
    const auto fields = Split(raw, '\t');
    if (fields.size() != 4 && fields.size() != 5) {
      ParseFail(line_no, "expected 5 tab-separated fields, got " +
                             std::to_string(fields.size()));
    }
    Song song;
    song.id = std::string(fields[0]);
    song.artist_id = std::string(fields[1]);
    song.language = std::string(fields[2]);
    if (song.id.empty()) ParseFail(line_no, "empty song id");
    if (song.artist_id.empty()) ParseFail(line_no, "empty artist id");
    if (song.language.empty()) ParseFail(line_no, "empty language code");
    if (!seen.insert(song.id).second) {
      throw Error(ErrorCode::kDuplicateId, "manifest line " +
                                               std::to_string(line_no) +
                                               ": duplicate id '" + song.id +
                                               "'");
    }
    std::filesystem::path source{std::string(fields[3])};
    if (source.is_relative()) source = base / source;
    if (!std::filesystem::exists(source)) {
      throw Error(ErrorCode::kMissingFile,
                  "song " + song.id + ": missing file " + source.string());
    }
    song.source = source;
    song.duration = SourceDuration(source);
    if (fields.size() == 5) song.words = ParseWords(fields[4], line_no);
    ValidateWords(song, line_no);
    corpus.songs.push_back(std::move(song));
  }
  if (corpus.songs.empty()) {
    corpus.warnings.push_back("manifest " + path.string() +
                              " contains no songs");
  }
  return corpus;
}

void WriteManifest(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const std::filesystem::path base = path.parent_path();
  for (const Song& song : corpus.songs) {
    std::filesystem::path source = song.source;
    if (!base.empty() && source.is_absolute()) {
      std::error_code ec;
      auto rel = std::filesystem::relative(source, base, ec);
      if (!ec && !rel.empty()) source = rel;
    }
    out << song.id << '\t' << song.artist_id << '\t' << song.language << '\t'
        << source.generic_string() << '\t';
    for (std::size_t i = 0; i < song.words.size(); ++i) {
      const Word& w = song.words[i];
      if (i > 0) out << ';';
      out << w.ipa << '|' << FormatSeconds(w.start) << '|'
          << FormatSeconds(w.end);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace slid::corpus
