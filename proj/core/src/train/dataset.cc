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

#include "slid/train/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "slid/corpus/text_lid.h"
#include "slid/error.h"
#include "slid/features/feature_cache.h"
#include "slid/features/wav.h"

namespace slid::train {

void Scenario::Validate() const {
  if (kind != "closed" && kind != "open") {
    throw Error(ErrorCode::kConfig,
                "scenario: kind must be closed or open, got '" + kind + "'");
  }
  std::set<std::string> seen;
  for (const auto& t : targets) {
    if (t.empty() || t == kOthersClass) {
      throw Error(ErrorCode::kConfig, "scenario: invalid target '" + t + "'");
    }
    if (!seen.insert(t).second) {
      throw Error(ErrorCode::kConfig, "scenario: duplicate target '" + t + "'");
    }
  }
  if (!open() && !out_of_domain.empty()) {
    throw Error(ErrorCode::kConfig,
                "scenario: out_of_domain languages require the open set");
  }
  for (const auto& o : out_of_domain) {
    if (seen.count(o) != 0) {
      throw Error(ErrorCode::kConfig,
                  "scenario: '" + o + "' is both a target and out-of-domain");
    }
  }
}

std::vector<std::string> Scenario::ClassNames() const {
  std::vector<std::string> names = targets;
  if (open()) names.push_back(kOthersClass);
  return names;
}

int Scenario::ClassOf(const std::string& language) const {
  const auto it = std::find(targets.begin(), targets.end(), language);
  if (it != targets.end()) return static_cast<int>(it - targets.begin());
  return open() ? static_cast<int>(targets.size()) : -1;
}

Scenario ResolveScenario(Scenario scenario, const corpus::Corpus& corpus) {
  if (scenario.targets.empty()) {
    if (scenario.open()) {
      throw Error(ErrorCode::kConfig,
                  "scenario: the open set needs explicit target languages");
    }
    std::set<std::string> langs;
    for (const auto& s : corpus.songs) langs.insert(s.language);
    for (const auto& o : scenario.out_of_domain) langs.erase(o);
    scenario.targets.assign(langs.begin(), langs.end());
  }
  scenario.Validate();
  return scenario;
}

features::FeatureMatrix LoadSongFeatures(
    const corpus::Song& song, const features::FeatureConfig& config) {
  features::FeatureMatrix m;
  if (song.source.extension() == ".wav") {
    int rate = 0;
    const std::vector<double> wave = features::ReadWav(song.source, &rate);
    if (rate != config.sample_rate) {
      throw Error(ErrorCode::kInvalidArgument,
                  "song " + song.id + ": expected " +
                      std::to_string(config.sample_rate) + " Hz audio, got " +
                      std::to_string(rate));
    }
    m = features::ExtractFeatures(wave, config);
  } else {
    m = features::ReadFeatureCache(song.source);
  }
  if (m.cols() != static_cast<std::size_t>(config.feature_dim())) {
    throw Error(ErrorCode::kShapeMismatch,
                "song " + song.id + ": expected " +
                    std::to_string(config.feature_dim()) +
                    " feature columns, got " + std::to_string(m.cols()));
  }
  return m;
}

features::FeatureMatrix SliceSegment(const features::FeatureMatrix& song_features,
                                     const corpus::Segment& segment,
                                     const features::FeatureConfig& config) {
  const std::size_t total = song_features.rows();
  const auto samples = static_cast<std::size_t>(
      std::llround(segment.length() * config.sample_rate));
  std::size_t count = std::min(features::NumFrames(samples, config), total);
  if (count == 0) count = total;
  auto begin = static_cast<std::size_t>(
      std::max(0LL, std::llround(segment.start * config.frame_rate())));
  if (begin + count > total) begin = total - count;
  return song_features.Slice(begin, count);
}

std::vector<Example> SegmentWithFeatures(const corpus::Song& song,
                                         const DatasetConfig& config) {
  const features::FeatureMatrix song_features =
      LoadSongFeatures(song, config.features);
  std::vector<Example> out;
  for (auto& seg : corpus::SegmentSong(song, config.segmentation)) {
    Example ex;
    ex.features = SliceSegment(song_features, seg, config.features);
    ex.segment = std::move(seg);
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<double> ComputeClassWeights(std::span<const int> labels,
                                        int num_classes) {
  if (num_classes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "class weights: no classes");
  }
  std::vector<double> counts(static_cast<std::size_t>(num_classes), 0.0);
  double total = 0.0;
  for (int l : labels) {
    if (l < 0) continue;
    if (l >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "class weights: label out of range");
    }
    counts[static_cast<std::size_t>(l)] += 1.0;
    total += 1.0;
  }
  std::vector<double> weights(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kDegenerate,
                  "class weights: class " + std::to_string(c) +
                      " has no labeled training segment");
    }
    weights[c] = total / (static_cast<double>(num_classes) * counts[c]);
  }
  return weights;
}

nn::Tensor ToTensor(const features::FeatureMatrix& features) {
  nn::Tensor t({features.rows(), features.cols()});
  const auto& data = features.data();
  for (std::size_t i = 0; i < data.size(); ++i) t[i] = data[i];
  return t;
}

namespace {

void FillSplit(const std::vector<corpus::Song>& songs, SplitData& split,
               const DatasetConfig& config, const Scenario& scenario) {
  split.songs = songs;
  for (std::size_t i = 0; i < songs.size(); ++i) {
    split.song_labels.push_back(scenario.ClassOf(songs[i].language));
    for (auto& ex : SegmentWithFeatures(songs[i], config)) {
      ex.song = i;
      split.examples.push_back(std::move(ex));
    }
  }
}

}  // namespace

Dataset BuildDataset(const corpus::Corpus& corpus, const DatasetConfig& config) {
  config.features.Validate();
  config.segmentation.Validate();
  config.labeling.Validate();
  config.split.Validate();
  const Scenario scenario = ResolveScenario(config.scenario, corpus);

  Dataset ds;
  ds.scenario = scenario;
  ds.classes = scenario.ClassNames();
  if (ds.classes.size() < 2) {
    throw Error(ErrorCode::kDegenerate,
                "dataset: the label space needs at least two classes");
  }

  std::vector<corpus::Song> in_scope, held_out;
  const std::set<std::string> ood(scenario.out_of_domain.begin(),
                                  scenario.out_of_domain.end());
  for (const auto& song : corpus.songs) {
    if (ood.count(song.language) != 0) {
      held_out.push_back(song);
    } else if (scenario.ClassOf(song.language) >= 0) {
      in_scope.push_back(song);
    } else {
      ds.warnings.push_back("song " + song.id + ": language '" + song.language +
                            "' is outside the closed set; skipped");
    }
  }
  corpus::CorpusSplit split = corpus::SplitCorpus(in_scope, config.split);
  ds.warnings.insert(ds.warnings.end(), split.warnings.begin(),
                     split.warnings.end());
  split.test.insert(split.test.end(), held_out.begin(), held_out.end());

  FillSplit(split.train, ds.train, config, scenario);
  FillSplit(split.val, ds.val, config, scenario);
  FillSplit(split.test, ds.test, config, scenario);

  std::vector<std::pair<std::string, std::string>> texts;
  for (const auto& song : ds.train.songs) {
    ds.train_languages.insert(song.language);
    std::vector<std::string> words;
    for (const auto& w : song.words) words.push_back(w.ipa);
    texts.emplace_back(corpus::JoinWords(words), song.language);
  }
  if (texts.empty()) {
    throw Error(ErrorCode::kDegenerate, "dataset: training split is empty");
  }
  const auto text_lid = corpus::NgramTextLid::Train(texts);

  std::vector<corpus::Segment> train_segments;
  for (auto* split_data : {&ds.train, &ds.val, &ds.test}) {
    for (auto& ex : split_data->examples) {
      ex.segment.label =
          corpus::LabelSegment(ex.segment.words, text_lid, config.labeling);
      if (split_data == &ds.train) train_segments.push_back(ex.segment);
    }
  }
  ds.charset = corpus::Charset::Build(train_segments);

  for (auto* split_data : {&ds.train, &ds.val, &ds.test}) {
    for (auto& ex : split_data->examples) {
      const auto& label = ex.segment.label;
      if (label.kind == corpus::SegmentKind::kInstrumental) {
        ex.target = {ds.charset.instrumental_id()};
      } else {
        int dropped = 0;
        ex.target = ds.charset.Encode(ex.segment.words, &dropped);
        ds.dropped_phonemes += dropped;
      }
      ex.label = label.kind == corpus::SegmentKind::kLanguage
                     ? scenario.ClassOf(label.language)
                     : -1;
    }
  }

  std::vector<int> labels;
  for (const auto& ex : ds.train.examples) labels.push_back(ex.label);
  ds.class_weights =
      ComputeClassWeights(labels, static_cast<int>(ds.classes.size()));
  return ds;
}

}  // namespace slid::train
