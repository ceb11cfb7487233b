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

// Command-line entry point: synth, prepare, train, predict, evaluate and
// selftest. Errors are reported on stderr as one line
// "error<TAB>code<TAB>message" with a non-zero exit status.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "slid/config/run_config.h"
#include "slid/corpus/manifest.h"
#include "slid/corpus/synth.h"
#include "slid/error.h"
#include "slid/features/feature_cache.h"
#include "slid/pipeline.h"
#include "slid/selftest.h"
#include "slid/train/dataset.h"

namespace {

namespace fs = std::filesystem;
using slid::Error;
using slid::ErrorCode;

struct Flags {
  std::string config;
  std::string mode;
  std::string scenario;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::string run_dir;
  std::string manifest;
  std::string song;
};

slid::config::RunConfig LoadConfig(const Flags& flags) {
  slid::config::RunConfig c;
  if (!flags.config.empty()) c = slid::config::RunConfig::Load(flags.config);
  if (!flags.manifest.empty()) c.manifest = fs::absolute(flags.manifest);
  if (!flags.scenario.empty()) c.dataset.scenario.kind = flags.scenario;
  if (flags.seed) c.seed = *flags.seed;
  if (flags.workers) c.workers = *flags.workers;
  c.Propagate();
  c.Validate();
  return c;
}

fs::path RequireRunDir(const Flags& flags) {
  if (flags.run_dir.empty()) {
    throw Error(ErrorCode::kConfig, "--run-dir is required");
  }
  return flags.run_dir;
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

int Synth(const Flags& flags) {
  const auto config = LoadConfig(flags);
  const fs::path dir = RequireRunDir(flags);
  const auto corpus = slid::corpus::GenerateSynth(
      config.synth.ToSpec(), dir, config.dataset.features,
      config.synth.write_audio);
  std::cout << "synth\tsongs=" << corpus.songs.size()
            << "\tmanifest=" << (dir / "manifest.tsv").string() << "\n";
  return 0;
}

int Prepare(const Flags& flags) {
  const auto config = LoadConfig(flags);
  const fs::path dir = RequireRunDir(flags);
  fs::create_directories(dir / "features");
  auto corpus = slid::corpus::LoadManifest(config.manifest);
  for (const auto& w : corpus.warnings) std::cerr << "warning\t" << w << "\n";
  for (auto& song : corpus.songs) {
    if (song.source.extension() == ".wav") {
      const fs::path cache = dir / "features" / (song.id + ".feat");
      slid::features::WriteFeatureCache(
          cache, slid::train::LoadSongFeatures(song, config.dataset.features));
      song.source = fs::absolute(cache);
    }
  }
  slid::corpus::WriteManifest(dir / "manifest.tsv", corpus);
  auto prepared = config;
  prepared.manifest = fs::absolute(dir / "manifest.tsv");
  const auto data = slid::pipeline::LoadDataset(prepared);
  std::string charset;
  for (const auto& t : data.charset.tokens()) charset += t + "\n";
  WriteFile(dir / "charset.txt", charset);
  std::string segments = "split\tsong_id\tstart\tend\tlabel\twords\n";
  const std::pair<const char*, const slid::train::SplitData*> splits[] = {
      {"train", &data.train}, {"val", &data.val}, {"test", &data.test}};
  for (const auto& [name, split] : splits) {
    for (const auto& ex : split->examples) {
      segments += std::string(name) + "\t" + ex.segment.song_id + "\t" +
                  std::to_string(ex.segment.start) + "\t" +
                  std::to_string(ex.segment.end) + "\t" +
                  slid::corpus::SegmentLabelName(ex.segment.label) + "\t" +
                  std::to_string(ex.segment.words.size()) + "\n";
    }
  }
  WriteFile(dir / "segments.tsv", segments);
  WriteFile(dir / "config.json", prepared.ToJson());
  for (const auto& w : data.warnings) std::cerr << "warning\t" << w << "\n";
  std::cout << "prepare\tsongs=" << corpus.songs.size()
            << "\tcharset=" << data.charset.size() << "\ttrain_segments="
            << data.train.examples.size() << "\n";
  return 0;
}

int Train(const Flags& flags) {
  if (flags.mode.empty()) {
    throw Error(ErrorCode::kConfig,
                "train: --mode two_step|joint|e2e|statistics is required");
  }
  const auto mode = slid::pipeline::ParseMode(flags.mode);
  const auto config = LoadConfig(flags);
  const fs::path dir = RequireRunDir(flags);
  fs::create_directories(dir);
  const auto data = slid::pipeline::LoadDataset(config);
  for (const auto& w : data.warnings) std::cerr << "warning\t" << w << "\n";
  std::ofstream log(dir / "train.log", std::ios::binary);
  const auto models = slid::pipeline::Train(
      data, config, mode, [&](const slid::train::EpochLog& e) {
        const std::string line = e.ToLine();
        log << line << "\n" << std::flush;
        std::cerr << line << "\n";
      });
  slid::pipeline::SaveModels(dir, models, config);
  std::cout << "train\tmode=" << slid::pipeline::ModeName(mode)
            << "\trun_dir=" << dir.string() << "\n";
  return 0;
}

int Predict(const Flags& flags) {
  const fs::path dir = RequireRunDir(flags);
  slid::config::RunConfig config;
  const auto models = slid::pipeline::LoadModels(dir, &config);
  if (flags.workers) config.workers = *flags.workers;
  config.Propagate();
  const fs::path manifest =
      flags.manifest.empty() ? config.manifest : fs::path(flags.manifest);
  const auto corpus = slid::corpus::LoadManifest(manifest);
  slid::train::SplitData split;
  for (const auto& song : corpus.songs) {
    if (!flags.song.empty() && song.id != flags.song) continue;
    const std::size_t index = split.songs.size();
    split.songs.push_back(song);
    split.song_labels.push_back(-1);
    for (auto& ex : slid::train::SegmentWithFeatures(song, config.dataset)) {
      ex.song = index;
      split.examples.push_back(std::move(ex));
    }
  }
  if (!flags.song.empty() && split.songs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "predict: no song '" + flags.song + "' in " + manifest.string());
  }
  for (const auto& p : slid::pipeline::Predict(models, split, config)) {
    std::cout << p.ToLine() << "\n";
  }
  return 0;
}

int Evaluate(const Flags& flags) {
  const fs::path dir = RequireRunDir(flags);
  slid::config::RunConfig config;
  const auto models = slid::pipeline::LoadModels(dir, &config);
  if (flags.workers) config.workers = *flags.workers;
  config.Propagate();
  const auto data = slid::pipeline::LoadDataset(config);
  const auto report = slid::pipeline::Evaluate(models, data, config);
  WriteFile(dir / "report.json", report.ToJson());
  WriteFile(dir / "report.txt", report.ToTable());
  std::cout << report.ToTable();
  return 0;
}

int SelfTest(const Flags& flags) {
  const auto report = slid::RunSelfTest(flags.seed.value_or(1));
  std::cout << report.ToText();
  if (!report.passed()) {
    throw Error(ErrorCode::kState, "selftest: at least one check failed");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singing language identification from phoneme posteriorgrams"};
  app.require_subcommand(1);
  Flags flags;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "JSON config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--scenario", flags.scenario, "closed or open")
        ->check(CLI::IsMember({"closed", "open"}));
    cmd->add_option("--workers", flags.workers, "worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seed, "overrides the config seed");
    cmd->add_option("--run-dir", flags.run_dir, "output directory");
    cmd->add_option("--manifest", flags.manifest, "overrides the manifest");
  };
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  common(synth);
  auto* prepare = app.add_subcommand("prepare", "cache features and charset");
  common(prepare);
  auto* train = app.add_subcommand("train", "train models into --run-dir");
  common(train);
  train->add_option("--mode", flags.mode, "two_step, joint, e2e or statistics")
      ->check(CLI::IsMember({"two_step", "joint", "e2e", "statistics"}));
  auto* predict = app.add_subcommand("predict", "per-song language verdicts");
  common(predict);
  predict->add_option("--song", flags.song, "only this song id");
  auto* evaluate = app.add_subcommand("evaluate", "test-split report");
  common(evaluate);
  auto* selftest = app.add_subcommand("selftest", "CTC oracle and gradients");
  common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
      if (ch == '\n' || ch == '\t') ch = ' ';
    }
    std::cerr << "error\tusage\t" << msg << "\n";
    return 2;
  }
  try {
    if (*synth) return Synth(flags);
    if (*prepare) return Prepare(flags);
    if (*train) return Train(flags);
    if (*predict) return Predict(flags);
    if (*evaluate) return Evaluate(flags);
    if (*selftest) return SelfTest(flags);
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
      if (ch == '\n' || ch == '\t') ch = ' ';
    }
    std::cerr << "error\t" << slid::ErrorCodeName(e.code()) << "\t" << msg
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error\tinternal\t" << e.what() << "\n";
    return 1;
  }
  return 1;
}
