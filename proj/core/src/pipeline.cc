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

#include "slid/pipeline.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slid/corpus/manifest.h"
#include "slid/error.h"
#include "slid/nn/checkpoint.h"

namespace slid::pipeline {

namespace {

using nlohmann::ordered_json;

std::uint64_t ModelSeed(std::uint64_t seed, int which) {
  return train::ItemSeed(seed, 1000 + which, 0);
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

Mode ParseMode(const std::string& name) {
  if (name == "two_step") return Mode::kTwoStep;
  if (name == "joint") return Mode::kJoint;
  if (name == "e2e") return Mode::kE2e;
  if (name == "statistics") return Mode::kStatistics;
  throw Error(ErrorCode::kConfig,
              "mode must be two_step, joint, e2e or statistics, got '" + name +
                  "'");
}

std::string ModeName(Mode mode) {
  switch (mode) {
    case Mode::kTwoStep:
      return "two_step";
    case Mode::kJoint:
      return "joint";
    case Mode::kE2e:
      return "e2e";
    case Mode::kStatistics:
      return "statistics";
  }
  return "unknown";
}

train::Dataset LoadDataset(const config::RunConfig& config) {
  if (config.manifest.empty()) {
    throw Error(ErrorCode::kConfig, "manifest: no manifest path configured");
  }
  const corpus::Corpus corpus = corpus::LoadManifest(config.manifest);
  if (corpus.songs.empty()) {
    throw Error(ErrorCode::kDegenerate,
                "manifest " + config.manifest.string() + " has no songs");
  }
  return train::BuildDataset(corpus, config.dataset);
}

namespace {

TrainedModels Skeleton(const train::Dataset& data, Mode mode) {
  TrainedModels m;
  m.mode = mode;
  m.classes = data.classes;
  m.charset = data.charset;
  m.train_languages = data.train_languages;
  return m;
}

}  // namespace

TrainedModels Train(const train::Dataset& data, const config::RunConfig& config,
                    Mode mode, const train::LogSink& sink) {
  config.Validate();
  TrainedModels m = Skeleton(data, mode);
  const std::size_t tokens = data.charset.size();
  m.am = model::AcousticModel(config.acoustic, tokens, ModelSeed(config.seed, 0));
  auto collect = [&](const train::TrainResult& r) {
    m.log.insert(m.log.end(), r.log.begin(), r.log.end());
  };
  if (mode == Mode::kTwoStep || mode == Mode::kStatistics) {
    collect(train::TrainAcoustic(m.am, data.train.examples, data.val.examples,
                                 config.train, sink));
  }
  if (mode == Mode::kStatistics) {
    m.linear = train::TrainStatistics(m.am, data.train,
                                      static_cast<int>(data.classes.size()),
                                      config.linear, config.train);
  } else {
    m.lid = model::LanguageClassifier(config.classifier, tokens,
                                      data.classes.size(),
                                      ModelSeed(config.seed, 1));
    if (mode == Mode::kTwoStep) {
      collect(train::TrainLid(*m.lid, m.am, data.train.examples,
                              data.val.examples, data.class_weights,
                              config.train, sink));
    } else {
      collect(train::TrainJoint(m.am, *m.lid, data.train.examples,
                                data.val.examples, data.class_weights,
                                config.train, mode == Mode::kE2e ? 0.0 : 1.0,
                                sink));
    }
    nn::RoundToFloat(m.lid->Parameters());
  }
  nn::RoundToFloat(m.am.Parameters());
  return m;
}

TrainedModels TrainStatisticsOn(const model::AcousticModel& am,
                                const train::Dataset& data,
                                const config::RunConfig& config) {
  TrainedModels m = Skeleton(data, Mode::kStatistics);
  m.am = am;
  m.linear = train::TrainStatistics(m.am, data.train,
                                    static_cast<int>(data.classes.size()),
                                    config.linear, config.train);
  return m;
}

eval::InferenceConfig InferenceFor(const TrainedModels& models,
                                   const config::RunConfig& config) {
  eval::InferenceConfig inf = config.inference;
  if (models.mode == Mode::kE2e) {
    inf.clean = false;
    inf.word_filter = false;
  }
  return inf;
}

std::vector<eval::SongPrediction> Predict(const TrainedModels& models,
                                          const train::SplitData& split,
                                          const config::RunConfig& config) {
  const eval::InferenceConfig inf = InferenceFor(models, config);
  if (models.linear) {
    eval::StatisticsSystem sys{models.am, *models.linear, models.classes};
    return eval::PredictSongs(sys, split, inf);
  }
  if (!models.lid) {
    throw Error(ErrorCode::kState, "predict: no classifier loaded");
  }
  eval::NeuralSystem sys{models.am, *models.lid, models.classes};
  return eval::PredictSongs(sys, split, inf);
}

eval::EvalReport Evaluate(const TrainedModels& models,
                          const train::Dataset& data,
                          const config::RunConfig& config) {
  if (models.classes != data.classes) {
    throw Error(ErrorCode::kInvalidArgument,
                "evaluate: model label space differs from the dataset's");
  }
  const auto predictions = Predict(models, data.test, config);
  return eval::RunScenario(predictions, data.test, data.scenario,
                           models.train_languages, ModeName(models.mode),
                           config.evaluation);
}

void SaveModels(const std::filesystem::path& dir, const TrainedModels& models,
                const config::RunConfig& config) {
  std::filesystem::create_directories(dir);
  const std::string config_json = config.ToJson();
  WriteText(dir / "config.json", config_json);
  ordered_json meta;
  meta["mode"] = ModeName(models.mode);
  meta["classes"] = models.classes;
  meta["train_languages"] = models.train_languages;
  WriteText(dir / "model.json", meta.dump(2) + "\n");

  nn::Checkpoint base;
  base.config_json = config_json;
  base.fingerprint = nn::Fingerprint(config_json);
  base.charset = models.charset.tokens();

  nn::Checkpoint am = base;
  am.kind = "acoustic";
  auto am_copy = models.am;
  am.tensors = nn::ExportParameters(am_copy.Parameters());
  nn::WriteCheckpoint(dir / "am.ckpt", am);
  if (models.lid) {
    nn::Checkpoint lid = base;
    lid.kind = "lid";
    auto lid_copy = *models.lid;
    lid.tensors = nn::ExportParameters(lid_copy.Parameters());
    nn::WriteCheckpoint(dir / "lid.ckpt", lid);
  }
  if (models.linear) {
    nn::Checkpoint lin = base;
    lin.kind = "linear";
    lin.tensors = {{"linear/weight", models.linear->weights()},
                   {"linear/bias", models.linear->bias()}};
    nn::WriteCheckpoint(dir / "linear.ckpt", lin);
  }
}

TrainedModels LoadModels(const std::filesystem::path& dir,
                         config::RunConfig* config_out) {
  const std::string config_json = ReadText(dir / "config.json");
  config::RunConfig config = config::RunConfig::FromJson(config_json);
  const auto meta = ordered_json::parse(ReadText(dir / "model.json"));

  TrainedModels m;
  m.mode = ParseMode(meta.at("mode").get<std::string>());
  m.classes = meta.at("classes").get<std::vector<std::string>>();
  for (const auto& l : meta.at("train_languages")) {
    m.train_languages.insert(l.get<std::string>());
  }
  auto load = [&](const std::string& name, const std::string& kind) {
    nn::Checkpoint c = nn::ReadCheckpoint(dir / name);
    if (c.fingerprint != nn::Fingerprint(config_json)) {
      throw Error(ErrorCode::kConfig,
                  name + " was written under a different config");
    }
    if (c.kind != kind) {
      throw Error(ErrorCode::kConfig,
                  name + ": expected a '" + kind + "' checkpoint, got '" +
                      c.kind + "'");
    }
    return c;
  };
  const nn::Checkpoint am = load("am.ckpt", "acoustic");
  m.charset = corpus::Charset::FromTokens(am.charset);
  m.am = model::AcousticModel(config.acoustic, m.charset.size(), 0);
  nn::ImportParameters(am.tensors, m.am.Parameters());
  if (m.mode == Mode::kStatistics) {
    const nn::Checkpoint lin = load("linear.ckpt", "linear");
    nn::Tensor w, b;
    for (const auto& [name, t] : lin.tensors) {
      if (name == "linear/weight") w = t;
      if (name == "linear/bias") b = t;
    }
    m.linear = model::LinearClassifier::FromParameters(
        std::move(w), std::move(b), config.linear.length_normalize);
  } else {
    const nn::Checkpoint lid = load("lid.ckpt", "lid");
    m.lid = model::LanguageClassifier(config.classifier, m.charset.size(),
                                      m.classes.size(), 0);
    nn::ImportParameters(lid.tensors, m.lid->Parameters());
  }
  if (config_out != nullptr) *config_out = config;
  return m;
}

}  // namespace slid::pipeline
