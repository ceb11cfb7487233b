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

#include "slid/eval/predict.h"

#include <cstdio>

#include "parallel.h"
#include "slid/ctc/ctc.h"
#include "slid/error.h"
#include "slid/train/trainer.h"

namespace slid::eval {

void InferenceConfig::Validate() const {
  if (!(blank_threshold > 0 && blank_threshold <= 1)) {
    throw Error(ErrorCode::kConfig,
                "inference: blank_threshold must be in (0, 1]");
  }
  if (min_decoded_words < 0) {
    throw Error(ErrorCode::kConfig, "inference: min_decoded_words must be >= 0");
  }
  if (workers < 1) {
    throw Error(ErrorCode::kConfig, "inference: workers must be >= 1");
  }
}

std::string SongPrediction::ToLine() const {
  double score = 0.0;
  if (predicted >= 0) score = scores[static_cast<std::size_t>(predicted)];
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return song_id + "\t" + verdict + "\t" + buf;
}

int ArgmaxLowestIndex(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "argmax of an empty vector");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

SongPrediction AggregateSegments(
    const std::string& song_id,
    std::span<const std::optional<std::vector<double>>> segment_scores,
    const std::vector<std::string>& classes) {
  SongPrediction p;
  p.song_id = song_id;
  p.total_segments = static_cast<int>(segment_scores.size());
  std::vector<double> sum(classes.size(), 0.0);
  for (const auto& s : segment_scores) {
    if (!s) continue;
    if (s->size() != classes.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "song " + song_id + ": segment scores do not match the "
                  "label space");
    }
    for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += (*s)[c];
    ++p.usable_segments;
  }
  if (p.usable_segments == 0) {
    p.verdict = kInstrumentalVerdict;
    return p;
  }
  for (double& v : sum) v /= p.usable_segments;
  p.predicted = ArgmaxLowestIndex(sum);
  p.verdict = classes[static_cast<std::size_t>(p.predicted)];
  p.scores = std::move(sum);
  return p;
}

bool IsUsableSegment(const nn::Tensor& cleaned, int min_decoded_words) {
  if (cleaned.rows() == 0) return false;
  const auto decoded = ctc::GreedyDecode(cleaned, 0);
  int words = 0;
  bool in_word = false;
  for (int id : decoded) {
    // ids 0..2 are blank, space and the instrumental token
    if (id > 2) {
      if (!in_word) ++words;
      in_word = true;
    } else {
      in_word = false;
    }
  }
  return words >= min_decoded_words;
}

namespace {

std::vector<const train::Example*> Pointers(const train::SplitData& split) {
  std::vector<const train::Example*> out;
  for (const auto& e : split.examples) out.push_back(&e);
  return out;
}

nn::Tensor Prepare(const nn::Tensor& probs, const InferenceConfig& config) {
  return config.clean ? model::CleanPosteriorgram(probs, config.blank_threshold)
                      : probs;
}

}  // namespace

std::vector<SongPrediction> PredictSongs(const NeuralSystem& system,
                                         const train::SplitData& split,
                                         const InferenceConfig& config) {
  config.Validate();
  const auto items = Pointers(split);
  const auto probs =
      train::ComputePosteriorgrams(system.am, items, config.workers);
  std::vector<std::optional<std::vector<double>>> scores(items.size());
  const int w = internal::EffectiveWorkers(items.size(), config.workers);
  std::vector<model::LanguageClassifier> copies(static_cast<std::size_t>(w),
                                                system.lid);
  internal::ForEachChunk(
      items.size(), w, [&](int k, std::size_t begin, std::size_t end) {
        auto& lid = copies[static_cast<std::size_t>(k)];
        for (std::size_t i = begin; i < end; ++i) {
          const nn::Tensor r = Prepare(probs[i], config);
          if (r.rows() == 0) continue;
          if (config.word_filter &&
              !IsUsableSegment(r, config.min_decoded_words)) {
            continue;
          }
          const nn::Tensor p = lid.Forward(r, {});
          scores[i] = std::vector<double>(p.values().begin(), p.values().end());
        }
      });
  std::vector<std::vector<std::optional<std::vector<double>>>> per_song(
      split.songs.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    per_song[items[i]->song].push_back(std::move(scores[i]));
  }
  std::vector<SongPrediction> out;
  for (std::size_t s = 0; s < split.songs.size(); ++s) {
    out.push_back(
        AggregateSegments(split.songs[s].id, per_song[s], system.classes));
  }
  return out;
}

std::vector<SongPrediction> PredictSongs(const StatisticsSystem& system,
                                         const train::SplitData& split,
                                         const InferenceConfig& config) {
  config.Validate();
  const auto items = Pointers(split);
  const auto probs =
      train::ComputePosteriorgrams(system.am, items, config.workers);
  std::vector<std::vector<nn::Tensor>> per_song(split.songs.size());
  std::vector<int> segments(split.songs.size(), 0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    per_song[items[i]->song].push_back(Prepare(probs[i], config));
    ++segments[items[i]->song];
  }
  std::vector<SongPrediction> out;
  for (std::size_t s = 0; s < split.songs.size(); ++s) {
    std::size_t frames = 0;
    for (const auto& t : per_song[s]) frames += t.rows();
    std::vector<std::optional<std::vector<double>>> song_scores;
    if (frames > 0) {
      song_scores.push_back(
          system.classifier.Predict(model::StatsPool(per_song[s])));
    }
    SongPrediction p =
        AggregateSegments(split.songs[s].id, song_scores, system.classes);
    p.total_segments = segments[s];
    if (p.predicted >= 0) p.usable_segments = segments[s];
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace slid::eval
