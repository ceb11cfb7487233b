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

#include "slid/config/run_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "slid/error.h"

namespace slid::config {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void Fail(const std::string& what) {
  throw Error(ErrorCode::kConfig, what);
}

// Reads typed fields from one JSON object and rejects unknown keys.
class Section {
 public:
  Section(const ordered_json& j, std::string path)
      : json_(j), path_(std::move(path)) {
    if (!json_.is_object()) Fail(path_ + ": expected an object");
  }
  // Throws for any key no Get()/Child() call asked for.
  void Done() const {
    for (const auto& [key, value] : json_.items()) {
      if (used_.count(key) == 0) Fail(Key(key) + ": unknown key");
    }
  }

  template <typename T>
  void Get(const std::string& key, T& out) {
    used_.insert(key);
    const auto it = json_.find(key);
    if (it == json_.end()) return;
    Read(*it, key, out);
  }

  bool Has(const std::string& key) const { return json_.contains(key); }

  Section Child(const std::string& key) {
    used_.insert(key);
    static const ordered_json kEmpty = ordered_json::object();
    const auto it = json_.find(key);
    return Section(it == json_.end() ? kEmpty : *it, Key(key));
  }

 private:
  std::string Key(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void Read(const ordered_json& v, const std::string& key, double& out) {
    if (!v.is_number()) Fail(Key(key) + ": expected a number");
    out = v.get<double>();
  }
  void Read(const ordered_json& v, const std::string& key, int& out) {
    if (!v.is_number_integer()) Fail(Key(key) + ": expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < INT32_MIN || x > INT32_MAX) Fail(Key(key) + ": out of range");
    out = static_cast<int>(x);
  }
  void Read(const ordered_json& v, const std::string& key,
            std::uint64_t& out) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() &&
                                     v.get<std::int64_t>() >= 0)) {
      Fail(Key(key) + ": expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }
  void Read(const ordered_json& v, const std::string& key, bool& out) {
    if (!v.is_boolean()) Fail(Key(key) + ": expected true or false");
    out = v.get<bool>();
  }
  void Read(const ordered_json& v, const std::string& key, std::string& out) {
    if (!v.is_string()) Fail(Key(key) + ": expected a string");
    out = v.get<std::string>();
  }
  void Read(const ordered_json& v, const std::string& key,
            std::vector<std::string>& out) {
    if (!v.is_array()) Fail(Key(key) + ": expected an array of strings");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_string()) Fail(Key(key) + ": expected an array of strings");
      out.push_back(e.get<std::string>());
    }
  }

  const ordered_json& json_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace

corpus::SynthSpec SynthConfig::ToSpec() const {
  corpus::SynthSpec spec;
  spec.alphabet = corpus::DefaultSynthAlphabet();
  for (std::size_t i = 0; i < languages.size(); ++i) {
    spec.languages.push_back(corpus::MakeRandomLanguage(
        languages[i], spec.alphabet.size(), seed * 1000003ULL + i + 1,
        concentration));
  }
  spec.songs_per_language = songs_per_language;
  spec.artists_per_language = artists_per_language;
  spec.song_duration = song_duration;
  spec.noise_level = noise_level;
  spec.seed = seed;
  return spec;
}

void RunConfig::Validate() const {
  dataset.features.Validate();
  dataset.segmentation.Validate();
  dataset.labeling.Validate();
  dataset.split.Validate();
  dataset.scenario.Validate();
  acoustic.Validate();
  if (acoustic.feature_groups * acoustic.feature_bins !=
      dataset.features.feature_dim()) {
    Fail("acoustic: feature_groups * feature_bins must equal the feature "
         "dimension (" + std::to_string(dataset.features.feature_dim()) + ")");
  }
  classifier.Validate();
  linear.Validate();
  train.Validate();
  inference.Validate();
  if (evaluation.resamples < 0) Fail("evaluation.resamples must be >= 0");
  if (workers < 1) Fail("workers must be >= 1");
  if (synth.languages.empty()) Fail("synth.languages must not be empty");
  if (!(synth.concentration > 0)) Fail("synth.concentration must be > 0");
  synth.ToSpec().Validate();
}

void RunConfig::Propagate() {
  train.seed = seed;
  train.workers = workers;
  inference.workers = workers;
}

std::string RunConfig::ToJson() const {
  ordered_json j;
  j["manifest"] = manifest.string();
  j["seed"] = seed;
  j["workers"] = workers;
  j["synth"] = {{"languages", synth.languages},
                {"songs_per_language", synth.songs_per_language},
                {"artists_per_language", synth.artists_per_language},
                {"song_duration", synth.song_duration},
                {"noise_level", synth.noise_level},
                {"concentration", synth.concentration},
                {"seed", synth.seed},
                {"write_audio", synth.write_audio}};
  const auto& f = dataset.features;
  j["features"] = {{"sample_rate", f.sample_rate},
                   {"frame_length", f.frame_length},
                   {"hop_length", f.hop_length},
                   {"fft_size", f.fft_size},
                   {"num_mel_bins", f.num_mel_bins},
                   {"mel_low_hz", f.mel_low_hz},
                   {"mel_high_hz", f.mel_high_hz},
                   {"log_floor", f.log_floor},
                   {"delta_window", f.delta_window}};
  j["segmentation"] = {{"length", dataset.segmentation.length},
                       {"overlap", dataset.segmentation.overlap}};
  j["labeling"] = {
      {"min_words", dataset.labeling.min_words},
      {"repetition_threshold", dataset.labeling.repetition_threshold},
      {"confidence_threshold", dataset.labeling.confidence_threshold}};
  j["split"] = {{"train", dataset.split.train},
                {"val", dataset.split.val},
                {"test", dataset.split.test},
                {"seed", dataset.split.seed}};
  j["scenario"] = {{"kind", dataset.scenario.kind},
                   {"targets", dataset.scenario.targets},
                   {"out_of_domain", dataset.scenario.out_of_domain}};
  j["acoustic"] = {{"feature_groups", acoustic.feature_groups},
                   {"feature_bins", acoustic.feature_bins},
                   {"conv_blocks", acoustic.conv_blocks},
                   {"conv_filters", acoustic.conv_filters},
                   {"kernel_size", acoustic.kernel_size},
                   {"pool_time", acoustic.pool_time},
                   {"pool_freq", acoustic.pool_freq},
                   {"lstm_layers", acoustic.lstm_layers},
                   {"lstm_hidden", acoustic.lstm_hidden},
                   {"dropout", acoustic.dropout},
                   {"recurrent_dropout", acoustic.recurrent_dropout}};
  j["classifier"] = {{"lstm_layers", classifier.lstm_layers},
                     {"lstm_hidden", classifier.lstm_hidden},
                     {"dropout", classifier.dropout},
                     {"recurrent_dropout", classifier.recurrent_dropout}};
  j["linear"] = {{"l2", linear.l2},
                 {"learning_rate", linear.learning_rate},
                 {"iterations", linear.iterations},
                 {"length_normalize", linear.length_normalize}};
  j["train"] = {{"learning_rate", train.learning_rate},
                {"batch_size", train.batch_size},
                {"lambda_phase1", train.lambda_phase1},
                {"lambda_phase2", train.lambda_phase2},
                {"patience", train.patience},
                {"max_epochs", train.max_epochs},
                {"blank_threshold", train.blank_threshold}};
  j["inference"] = {{"blank_threshold", inference.blank_threshold},
                    {"min_decoded_words", inference.min_decoded_words}};
  j["evaluation"] = {{"resamples", evaluation.resamples},
                     {"seed", evaluation.seed}};
  return j.dump(2) + "\n";
}

RunConfig RunConfig::FromJson(std::string_view text,
                              const std::filesystem::path& base_dir) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  {
    Section top(root, "");
    std::string manifest;
    top.Get("manifest", manifest);
    if (!manifest.empty()) {
      std::filesystem::path p(manifest);
      if (p.is_relative() && !base_dir.empty()) {
        p = std::filesystem::weakly_canonical(std::filesystem::absolute(base_dir / p));
      }
      c.manifest = p;
    }
    top.Get("seed", c.seed);
    top.Get("workers", c.workers);
    {
      auto s = top.Child("synth");
      s.Get("languages", c.synth.languages);
      s.Get("songs_per_language", c.synth.songs_per_language);
      s.Get("artists_per_language", c.synth.artists_per_language);
      s.Get("song_duration", c.synth.song_duration);
      s.Get("noise_level", c.synth.noise_level);
      s.Get("concentration", c.synth.concentration);
      s.Get("seed", c.synth.seed);
      s.Get("write_audio", c.synth.write_audio);
      s.Done();
    }
    {
      auto s = top.Child("features");
      auto& f = c.dataset.features;
      s.Get("sample_rate", f.sample_rate);
      s.Get("frame_length", f.frame_length);
      s.Get("hop_length", f.hop_length);
      s.Get("fft_size", f.fft_size);
      s.Get("num_mel_bins", f.num_mel_bins);
      s.Get("mel_low_hz", f.mel_low_hz);
      s.Get("mel_high_hz", f.mel_high_hz);
      s.Get("log_floor", f.log_floor);
      s.Get("delta_window", f.delta_window);
      s.Done();
    }
    {
      auto s = top.Child("segmentation");
      s.Get("length", c.dataset.segmentation.length);
      s.Get("overlap", c.dataset.segmentation.overlap);
      s.Done();
    }
    {
      auto s = top.Child("labeling");
      s.Get("min_words", c.dataset.labeling.min_words);
      s.Get("repetition_threshold", c.dataset.labeling.repetition_threshold);
      s.Get("confidence_threshold", c.dataset.labeling.confidence_threshold);
      s.Done();
    }
    {
      auto s = top.Child("split");
      s.Get("train", c.dataset.split.train);
      s.Get("val", c.dataset.split.val);
      s.Get("test", c.dataset.split.test);
      s.Get("seed", c.dataset.split.seed);
      s.Done();
    }
    {
      auto s = top.Child("scenario");
      s.Get("kind", c.dataset.scenario.kind);
      s.Get("targets", c.dataset.scenario.targets);
      s.Get("out_of_domain", c.dataset.scenario.out_of_domain);
      s.Done();
    }
    {
      auto s = top.Child("acoustic");
      auto& a = c.acoustic;
      s.Get("feature_groups", a.feature_groups);
      s.Get("feature_bins", a.feature_bins);
      s.Get("conv_blocks", a.conv_blocks);
      s.Get("conv_filters", a.conv_filters);
      s.Get("kernel_size", a.kernel_size);
      s.Get("pool_time", a.pool_time);
      s.Get("pool_freq", a.pool_freq);
      s.Get("lstm_layers", a.lstm_layers);
      s.Get("lstm_hidden", a.lstm_hidden);
      s.Get("dropout", a.dropout);
      s.Get("recurrent_dropout", a.recurrent_dropout);
      s.Done();
    }
    {
      auto s = top.Child("classifier");
      s.Get("lstm_layers", c.classifier.lstm_layers);
      s.Get("lstm_hidden", c.classifier.lstm_hidden);
      s.Get("dropout", c.classifier.dropout);
      s.Get("recurrent_dropout", c.classifier.recurrent_dropout);
      s.Done();
    }
    {
      auto s = top.Child("linear");
      s.Get("l2", c.linear.l2);
      s.Get("learning_rate", c.linear.learning_rate);
      s.Get("iterations", c.linear.iterations);
      s.Get("length_normalize", c.linear.length_normalize);
      s.Done();
    }
    {
      auto s = top.Child("train");
      s.Get("learning_rate", c.train.learning_rate);
      s.Get("batch_size", c.train.batch_size);
      s.Get("lambda_phase1", c.train.lambda_phase1);
      s.Get("lambda_phase2", c.train.lambda_phase2);
      s.Get("patience", c.train.patience);
      s.Get("max_epochs", c.train.max_epochs);
      s.Get("blank_threshold", c.train.blank_threshold);
      s.Done();
    }
    {
      auto s = top.Child("inference");
      s.Get("blank_threshold", c.inference.blank_threshold);
      s.Get("min_decoded_words", c.inference.min_decoded_words);
      s.Done();
    }
    {
      auto s = top.Child("evaluation");
      s.Get("resamples", c.evaluation.resamples);
      s.Get("seed", c.evaluation.seed);
      s.Done();
    }
    top.Done();
  }
  c.Propagate();
  c.Validate();
  return c;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingFile,
                "config: cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str(), path.parent_path());
}

}  // namespace slid::config
