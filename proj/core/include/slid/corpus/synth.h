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

#ifndef SLID_CORPUS_SYNTH_H_
#define SLID_CORPUS_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slid/corpus/types.h"
#include "slid/features/features.h"

namespace slid::corpus {

// A synthetic language: a first-order Markov chain over a shared phoneme
// alphabet.
struct SynthLanguage {
  std::string code;
  std::vector<double> initial;                   // alphabet-sized
  std::vector<std::vector<double>> transitions;  // rows sum to 1
};

struct SynthSpec {
  std::vector<std::string> alphabet;  // one IPA codepoint per phoneme
  std::vector<SynthLanguage> languages;
  int songs_per_language = 30;
  int artists_per_language = 10;
  double song_duration = 40.0;  // seconds
  double noise_level = 0.02;    // white-noise standard deviation
  std::uint64_t seed = 0;

  int sample_rate = 16000;
  int min_word_phonemes = 2;
  int max_word_phonemes = 4;
  double min_phoneme_seconds = 0.14;
  double max_phoneme_seconds = 0.26;
  double min_gap_seconds = 0.18;
  double max_gap_seconds = 0.32;
  double lead_seconds = 0.5;
  double tone_amplitude = 0.25;

  // Throws Error(kInvalidArgument) on an invalid chain or layout.
  void Validate() const;
};

// Default inventory used by the CLI and tests.
std::vector<std::string> DefaultSynthAlphabet();

// Random chain with no self-transitions. Smaller `concentration` gives
// peakier rows and therefore more distinctive phonotactics.
SynthLanguage MakeRandomLanguage(const std::string& code,
                                 std::size_t alphabet_size, std::uint64_t seed,
                                 double concentration = 0.35);

// Centre frequency of phoneme `index` (mel-spaced between 300 and 6000 Hz).
double PhonemeFrequency(std::size_t index, std::size_t alphabet_size);

struct RenderedSong {
  Song song;  // id, artist, language, duration and words; no source yet
  std::vector<double> wave;
  // Phoneme index and sample span of every rendered phoneme, in order.
  struct Span {
    std::size_t phoneme;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Span> spans;
};

// Deterministic per (spec.seed, language_index, song_index).
RenderedSong RenderSong(const SynthSpec& spec, std::size_t language_index,
                        int song_index);

// Renders every song, writes a feature cache (or a .wav when `write_audio`)
// plus `manifest.tsv` into `out_dir`, and returns the corpus.
Corpus GenerateSynth(const SynthSpec& spec, const std::filesystem::path& out_dir,
                     const features::FeatureConfig& feature_config,
                     bool write_audio = false);

}  // namespace slid::corpus

#endif  // SLID_CORPUS_SYNTH_H_
