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

#include "slid/features/features.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "slid/corpus/synth.h"
#include "slid/error.h"
#include "slid/features/feature_cache.h"
#include "slid/features/wav.h"
#include "test_util.h"

namespace slid::features {
namespace {

using ::slid::testing::MakeTempDir;

std::vector<double> Tone(double hz, double seconds, double amplitude = 0.5,
                         int rate = 16000) {
  std::vector<double> wave(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < wave.size(); ++i) {
    wave[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  }
  return wave;
}

std::vector<double> Noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<double> wave(n);
  for (double& v : wave) v = d(rng);
  return wave;
}

// Independent mel-scale filter centres: 42 points evenly spaced on
// 2595 log10(1 + f / 700) between 0 and 8000 Hz; filter j peaks at point j+1.
std::vector<double> MelCentres(int filters = 40) {
  auto to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1); };
  const double top = to_mel(8000.0);
  std::vector<double> centres;
  for (int j = 1; j <= filters; ++j) {
    centres.push_back(to_hz(top * j / (filters + 1)));
  }
  return centres;
}

// Triangle weight of filter j at frequency f, from the independent centres.
double TriangleWeight(const std::vector<double>& centres, int j, double f) {
  const double left = j == 0 ? 0.0 : centres[j - 1];
  const double centre = centres[j];
  const double right =
      j + 1 < static_cast<int>(centres.size()) ? centres[j + 1] : 8000.0;
  if (f > left && f <= centre) return (f - left) / (centre - left);
  if (f > centre && f < right) return (right - f) / (right - centre);
  return 0.0;
}

int ArgmaxStatic(const FeatureMatrix& m, std::size_t row, int bins = 40) {
  int best = 0;
  for (int j = 1; j < bins; ++j) {
    if (m.at(row, j) > m.at(row, best)) best = j;
  }
  return best;
}

TEST(FrameSignalTest, OneSecondGivesSixtyOneFrames) {
  const FeatureConfig config;
  EXPECT_EQ(NumFrames(16000, config), 61u);
  const Matrix frames = FrameSignal(std::vector<double>(16000, 0.0), config);
  EXPECT_EQ(frames.rows, 61u);
  EXPECT_EQ(frames.cols, 512u);
}

TEST(FrameSignalTest, FiveHundredTwelveSamplesGiveOneFrame) {
  EXPECT_EQ(FrameSignal(std::vector<double>(512, 0.0), {}).rows, 1u);
}

TEST(FrameSignalTest, ConstantInputEqualsPeriodicHann) {
  const Matrix frames = FrameSignal(std::vector<double>(512, 1.0), {});
  for (int n = 0; n < 512; ++n) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / 512);
    EXPECT_NEAR(frames(0, n), hann, 1e-15) << n;
  }
}

TEST(FrameSignalTest, TooShortInputIsRejected) {
  EXPECT_THROW(FrameSignal(std::vector<double>(511, 0.0), {}), Error);
}

TEST(LogMelTest, SilentFrameIsLogFloor) {
  const FeatureConfig config;
  const Matrix frames = FrameSignal(std::vector<double>(512, 0.0), config);
  const Matrix logmel = LogMelEnergy(frames, config);
  ASSERT_EQ(logmel.cols, 41u);
  for (std::size_t c = 0; c < logmel.cols; ++c) {
    EXPECT_DOUBLE_EQ(logmel(0, c), std::log(config.log_floor));
  }
}

TEST(LogMelTest, OneKilohertzToneLandsInNearestCentreBin) {
  const auto centres = MelCentres();
  int expected = 0;
  for (int j = 1; j < 40; ++j) {
    if (std::abs(centres[j] - 1000.0) < std::abs(centres[expected] - 1000.0)) {
      expected = j;
    }
  }
  const FeatureConfig config;
  const Matrix logmel =
      LogMelEnergy(FrameSignal(Tone(1000.0, 0.2), config), config);
  for (std::size_t t = 0; t < logmel.rows; ++t) {
    int best = 0;
    for (int j = 1; j < 40; ++j) {
      if (logmel(t, j) > logmel(t, best)) best = j;
    }
    EXPECT_EQ(best, expected) << "frame " << t;
  }
}

TEST(LogMelTest, FilterbankCentresMatchIndependentMelScale) {
  const FeatureConfig config;
  const Matrix fb = MelFilterbank(config);
  const auto centres = MelCentres();
  const double bin_hz = 16000.0 / 512;
  for (int j = 0; j < 40; ++j) {
    // Peak FFT bin of filter j is the bin nearest its centre from below/above.
    int peak = 0;
    for (std::size_t k = 1; k < fb.cols; ++k) {
      if (fb(j, k) > fb(j, peak)) peak = static_cast<int>(k);
    }
    EXPECT_LE(std::abs(peak * bin_hz - centres[j]), bin_hz) << j;
    EXPECT_NEAR(fb(j, peak), TriangleWeight(centres, j, peak * bin_hz), 1e-9);
  }
}

TEST(LogMelTest, DoublingAmplitudeAddsLogFourToEnergy) {
  const FeatureConfig config;
  const auto wave = Noise(4096, 3);
  std::vector<double> doubled = wave;
  for (double& v : doubled) v *= 2.0;
  const Matrix a = LogMelEnergy(FrameSignal(wave, config), config);
  const Matrix b = LogMelEnergy(FrameSignal(doubled, config), config);
  for (std::size_t t = 0; t < a.rows; ++t) {
    EXPECT_NEAR(b(t, 40) - a(t, 40), std::log(4.0), 1e-9);
  }
}

TEST(DeltasTest, ConstantInputHasZeroDeltas) {
  Matrix in(7, 41);
  std::fill(in.data.begin(), in.data.end(), 3.25);
  const Matrix out = AddDeltas(in, {});
  ASSERT_EQ(out.cols, 123u);
  for (std::size_t t = 0; t < out.rows; ++t) {
    for (std::size_t c = 41; c < 123; ++c) EXPECT_EQ(out(t, c), 0.0);
    EXPECT_EQ(out(t, 0), 3.25);
  }
}

TEST(DeltasTest, RampHasInteriorDeltaEqualToSlope) {
  const double slope = 0.75;
  Matrix in(12, 41);
  for (std::size_t t = 0; t < in.rows; ++t) {
    for (std::size_t c = 0; c < in.cols; ++c) in(t, c) = slope * t + c;
  }
  const Matrix out = AddDeltas(in, {});
  for (std::size_t t = 2; t + 2 < in.rows; ++t) {
    for (std::size_t c = 0; c < 41; ++c) {
      EXPECT_NEAR(out(t, 41 + c), slope, 1e-12);
    }
  }
  // Double deltas of a line vanish where the deltas themselves are flat.
  for (std::size_t t = 4; t + 4 < in.rows; ++t) {
    EXPECT_NEAR(out(t, 82), 0.0, 1e-12);
  }
}

TEST(DeltasTest, SingleFrameHasZeroDeltas) {
  Matrix in(1, 41);
  for (std::size_t c = 0; c < 41; ++c) in(0, c) = static_cast<double>(c);
  const Matrix out = AddDeltas(in, {});
  for (std::size_t c = 41; c < 123; ++c) EXPECT_EQ(out(0, c), 0.0);
}

TEST(ExtractFeaturesTest, TwentySecondsGiveTwelveFortyNineRows) {
  const auto m = ExtractFeatures(std::vector<double>(320000, 0.0), {});
  EXPECT_EQ(m.rows(), 1249u);
  EXPECT_EQ(m.cols(), 123u);
  EXPECT_DOUBLE_EQ(m.frame_rate(), 62.5);
}

TEST(ExtractFeaturesTest, DeterministicAndFinite) {
  const auto wave = Noise(16000, 9);
  const auto a = ExtractFeatures(wave, {});
  const auto b = ExtractFeatures(wave, {});
  EXPECT_EQ(a, b);
  for (float v : a.data()) EXPECT_TRUE(std::isfinite(v));
}

TEST(ExtractFeaturesTest, ExtremeInputsStayFinite) {
  std::vector<double> wave(4096, 0.0);
  for (std::size_t i = 0; i < wave.size(); i += 7) wave[i] = 1e6;
  wave[100] = -1e6;
  const auto m = ExtractFeatures(wave, {});
  for (float v : m.data()) EXPECT_TRUE(std::isfinite(v));
}

TEST(ExtractFeaturesTest, HopShiftShiftsRows) {
  const FeatureConfig config;
  const auto wave = Noise(16000, 11);
  const std::vector<double> shifted(wave.begin() + config.hop_length,
                                    wave.end());
  // Compare the static block in double precision, away from delta edges.
  const Matrix a = LogMelEnergy(FrameSignal(wave, config), config);
  const Matrix b = LogMelEnergy(FrameSignal(shifted, config), config);
  ASSERT_EQ(a.rows, b.rows + 1);
  for (std::size_t t = 0; t < b.rows; ++t) {
    for (std::size_t c = 0; c < a.cols; ++c) {
      EXPECT_NEAR(b(t, c), a(t + 1, c), 1e-9);
    }
  }
  const Matrix da = AddDeltas(a, config);
  const Matrix db = AddDeltas(b, config);
  for (std::size_t t = 4; t + 4 < db.rows; ++t) {
    for (std::size_t c = 0; c < da.cols; ++c) {
      EXPECT_NEAR(db(t, c), da(t + 1, c), 1e-9);
    }
  }
}

TEST(ExtractFeaturesTest, SynthPrototypeDominatesItsBand) {
  corpus::SynthSpec spec;
  spec.alphabet = corpus::DefaultSynthAlphabet();
  spec.languages.push_back(
      corpus::MakeRandomLanguage("xx", spec.alphabet.size(), 1));
  spec.songs_per_language = 1;
  spec.song_duration = 8.0;
  spec.noise_level = 0.0;
  const corpus::RenderedSong r = corpus::RenderSong(spec, 0, 0);
  const FeatureConfig config;
  const FeatureMatrix m = ExtractFeatures(r.wave, config);
  const auto centres = MelCentres();
  const std::size_t k = spec.alphabet.size();
  int checked = 0;
  for (const auto& span : r.spans) {
    // A frame lying entirely inside the span, clear of the onset ramp.
    const std::size_t first = (span.begin + 320) / 256 + 1;
    if ((first * 256) + 512 + 320 > span.end || first >= m.rows()) continue;
    const double f = corpus::PhonemeFrequency(span.phoneme, k);
    std::vector<double> response(40);
    for (int j = 0; j < 40; ++j) {
      response[j] = TriangleWeight(centres, j, 0.98 * f) +
                    TriangleWeight(centres, j, 1.02 * f);
    }
    const double top = *std::max_element(response.begin(), response.end());
    const int observed = ArgmaxStatic(m, first);
    EXPECT_GE(response[observed], 0.75 * top)
        << "phoneme " << span.phoneme << " observed bin " << observed;
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(FeatureCacheTest, RoundTrips) {
  const auto dir = MakeTempDir("cache");
  const auto m = ExtractFeatures(Noise(4000, 5), {});
  WriteFeatureCache(dir / "x.feat", m);
  EXPECT_EQ(ReadFeatureCache(dir / "x.feat"), m);
  const auto header = ReadFeatureCacheHeader(dir / "x.feat");
  EXPECT_EQ(header.rows, m.rows());
  EXPECT_EQ(header.cols, 123u);
  EXPECT_DOUBLE_EQ(header.frame_rate, 62.5);
}

TEST(FeatureCacheTest, TruncatedFileIsRejected) {
  const auto dir = MakeTempDir("cache");
  const auto m = ExtractFeatures(Noise(4000, 5), {});
  WriteFeatureCache(dir / "x.feat", m);
  std::filesystem::resize_file(dir / "x.feat", 40);
  EXPECT_THROW(ReadFeatureCache(dir / "x.feat"), Error);
}

TEST(WavTest, RoundTripsWithin16BitPrecision) {
  const auto dir = MakeTempDir("wav");
  const auto wave = Tone(440.0, 0.1);
  WriteWav(dir / "t.wav", wave, 16000);
  int rate = 0;
  const auto back = ReadWav(dir / "t.wav", &rate);
  EXPECT_EQ(rate, 16000);
  ASSERT_EQ(back.size(), wave.size());
  for (std::size_t i = 0; i < wave.size(); ++i) {
    EXPECT_NEAR(back[i], wave[i], 1.0 / 32767.0);
  }
  EXPECT_EQ(ReadWavInfo(dir / "t.wav").num_samples, wave.size());
}

}  // namespace
}  // namespace slid::features
