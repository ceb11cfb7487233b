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

#include "slid/corpus/synth.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "slid/corpus/manifest.h"
#include "slid/error.h"
#include "slid/features/feature_cache.h"
#include "slid/features/wav.h"
#include "slid/utf8.h"

namespace slid::corpus {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t Sample(const std::vector<double>& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    r -= probs[i];
    if (r < 0) return i;
  }
  return probs.size() - 1;
}

void CheckDistribution(const std::vector<double>& row, std::size_t size,
                       const std::string& what) {
  if (row.size() != size) {
    throw Error(ErrorCode::kInvalidArgument,
                what + " has " + std::to_string(row.size()) +
                    " entries, expected " + std::to_string(size));
  }
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0)) {
      throw Error(ErrorCode::kInvalidArgument, what + " has a negative entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, what + " does not sum to 1");
  }
}

}  // namespace

void SynthSpec::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, "synth: " + why);
  };
  if (alphabet.size() < 2) fail("alphabet needs at least two phonemes");
  for (const std::string& p : alphabet) {
    if (DecodeUtf8(p).size() != 1) {
      fail("alphabet entries must be single codepoints, got '" + p + "'");
    }
    if (p == " " || p == "I") fail("alphabet may not contain ' ' or 'I'");
  }
  if (languages.empty()) fail("no languages");
  for (const SynthLanguage& lang : languages) {
    if (lang.code.empty()) fail("empty language code");
    CheckDistribution(lang.initial, alphabet.size(),
                      "language " + lang.code + " initial distribution");
    if (lang.transitions.size() != alphabet.size()) {
      fail("language " + lang.code + " transition matrix has wrong row count");
    }
    for (std::size_t r = 0; r < lang.transitions.size(); ++r) {
      CheckDistribution(lang.transitions[r], alphabet.size(),
                        "language " + lang.code + " transition row " +
                            std::to_string(r));
    }
  }
  if (songs_per_language < 1) fail("songs_per_language must be >= 1");
  if (artists_per_language < 1) fail("artists_per_language must be >= 1");
  if (!(song_duration > lead_seconds + 1.0)) fail("song_duration too short");
  if (!(noise_level >= 0)) fail("noise_level must be non-negative");
  if (min_word_phonemes < 1 || max_word_phonemes < min_word_phonemes) {
    fail("invalid word length range");
  }
  if (!(min_phoneme_seconds > 0 && max_phoneme_seconds >= min_phoneme_seconds)) {
    fail("invalid phoneme duration range");
  }
  if (!(min_gap_seconds > 0 && max_gap_seconds >= min_gap_seconds)) {
    fail("invalid gap duration range");
  }
  if (sample_rate <= 0) fail("sample_rate must be positive");
}

std::vector<std::string> DefaultSynthAlphabet() {
  return {"a", "e", "i", "k", "m", "n", "o", "p", "s", "t", "u",
          "\xC9\x9B" /* ɛ */, "\xC9\x94" /* ɔ */, "\xCA\x83" /* ʃ */};
}

SynthLanguage MakeRandomLanguage(const std::string& code,
                                 std::size_t alphabet_size, std::uint64_t seed,
                                 double concentration) {
  std::mt19937_64 rng(SplitMix64(seed));
  std::gamma_distribution<double> gamma(concentration, 1.0);
  SynthLanguage lang;
  lang.code = code;
  lang.initial.assign(alphabet_size, 1.0 / static_cast<double>(alphabet_size));
  lang.transitions.assign(alphabet_size, std::vector<double>(alphabet_size));
  for (std::size_t r = 0; r < alphabet_size; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < alphabet_size; ++c) {
      const double g = r == c ? 0.0 : gamma(rng) + 1e-3;
      lang.transitions[r][c] = g;
      sum += g;
    }
    for (double& p : lang.transitions[r]) p /= sum;
  }
  return lang;
}

double PhonemeFrequency(std::size_t index, std::size_t alphabet_size) {
  const double lo = features::HzToMel(300.0);
  const double hi = features::HzToMel(6000.0);
  const double step =
      alphabet_size > 1 ? (hi - lo) / static_cast<double>(alphabet_size - 1) : 0;
  return features::MelToHz(lo + step * static_cast<double>(index));
}

RenderedSong RenderSong(const SynthSpec& spec, std::size_t language_index,
                        int song_index) {
  const SynthLanguage& lang = spec.languages.at(language_index);
  std::mt19937_64 rng(SplitMix64(
      spec.seed ^ SplitMix64((language_index + 1) * 0x100000001B3ULL +
                             static_cast<std::uint64_t>(song_index))));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  std::uniform_int_distribution<int> word_len(spec.min_word_phonemes,
                                              spec.max_word_phonemes);

  RenderedSong out;
  char id[64];
  std::snprintf(id, sizeof(id), "%s_%03d", lang.code.c_str(), song_index);
  out.song.id = id;
  out.song.artist_id =
      lang.code + "_a" + std::to_string(song_index % spec.artists_per_language);
  out.song.language = lang.code;
  out.song.duration = spec.song_duration;

  const double sr = spec.sample_rate;
  const auto total =
      static_cast<std::size_t>(std::llround(spec.song_duration * sr));
  out.wave.assign(total, 0.0);

  const std::size_t alphabet_size = spec.alphabet.size();
  std::size_t state = Sample(lang.initial, rng);
  bool first = true;
  double t = spec.lead_seconds;
  const double tail = 0.2;
  while (true) {
    const int n = word_len(rng);
    std::vector<std::size_t> phonemes;
    std::vector<double> durations;
    double word_len_s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!first) state = Sample(lang.transitions[state], rng);
      first = false;
      phonemes.push_back(state);
      durations.push_back(
          uniform(spec.min_phoneme_seconds, spec.max_phoneme_seconds));
      word_len_s += durations.back();
    }
    if (t + word_len_s > spec.song_duration - tail) break;
    Word word;
    word.start = t;
    for (std::size_t k = 0; k < phonemes.size(); ++k) {
      word.ipa += spec.alphabet[phonemes[k]];
      const auto begin = static_cast<std::size_t>(std::llround(t * sr));
      const auto end =
          static_cast<std::size_t>(std::llround((t + durations[k]) * sr));
      out.spans.push_back({phonemes[k], begin, end});
      t += durations[k];
    }
    word.end = t;
    out.song.words.push_back(std::move(word));
    t += uniform(spec.min_gap_seconds, spec.max_gap_seconds);
  }

  // Tones: two close partials around the phoneme's centre frequency with a
  // 10 ms raised-cosine onset and offset.
  const double ramp = 0.01 * sr;
  for (const auto& span : out.spans) {
    const double f = PhonemeFrequency(span.phoneme, alphabet_size);
    const double phase1 = uniform(0.0, 2.0 * std::numbers::pi);
    const double phase2 = uniform(0.0, 2.0 * std::numbers::pi);
    const double len = static_cast<double>(span.end - span.begin);
    for (std::size_t s = span.begin; s < span.end && s < total; ++s) {
      const double local = static_cast<double>(s - span.begin);
      double env = 1.0;
      if (local < ramp) {
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * local / ramp);
      } else if (len - local < ramp) {
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * (len - local) / ramp);
      }
      const double time = static_cast<double>(s) / sr;
      out.wave[s] += spec.tone_amplitude * env *
                     (std::sin(2.0 * std::numbers::pi * f * 0.98 * time + phase1) +
                      std::sin(2.0 * std::numbers::pi * f * 1.02 * time + phase2));
    }
  }
  if (spec.noise_level > 0) {
    std::normal_distribution<double> noise(0.0, spec.noise_level);
    for (double& s : out.wave) s += noise(rng);
  }
  return out;
}

Corpus GenerateSynth(const SynthSpec& spec, const std::filesystem::path& out_dir,
                     const features::FeatureConfig& feature_config,
                     bool write_audio) {
  spec.Validate();
  if (feature_config.sample_rate != spec.sample_rate) {
    throw Error(ErrorCode::kInvalidArgument,
                "synth: feature and synth sample rates differ");
  }
  std::filesystem::create_directories(out_dir);
  Corpus corpus;
  for (std::size_t l = 0; l < spec.languages.size(); ++l) {
    for (int j = 0; j < spec.songs_per_language; ++j) {
      RenderedSong rendered = RenderSong(spec, l, j);
      Song song = std::move(rendered.song);
      if (write_audio) {
        song.source = out_dir / (song.id + ".wav");
        features::WriteWav(song.source, rendered.wave, spec.sample_rate);
      } else {
        song.source = out_dir / (song.id + ".feat");
        features::WriteFeatureCache(
            song.source, features::ExtractFeatures(rendered.wave, feature_config));
        song.duration = SourceDuration(song.source);
      }
      corpus.songs.push_back(std::move(song));
    }
  }
  WriteManifest(out_dir / "manifest.tsv", corpus);
  return corpus;
}

}  // namespace slid::corpus
