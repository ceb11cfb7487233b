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

#ifndef SLID_FEATURES_FEATURES_H_
#define SLID_FEATURES_FEATURES_H_

#include <cstddef>
#include <span>
#include <vector>

namespace slid::features {

struct FeatureConfig {
  int sample_rate = 16000;
  int frame_length = 512;  // 32 ms at 16 kHz
  int hop_length = 256;    // 0.5 overlap
  int fft_size = 512;
  int num_mel_bins = 40;
  double mel_low_hz = 0.0;
  double mel_high_hz = 8000.0;
  double log_floor = 1e-10;
  int delta_window = 2;

  int static_dim() const { return num_mel_bins + 1; }
  int feature_dim() const { return 3 * static_dim(); }
  double frame_rate() const {
    return static_cast<double>(sample_rate) / hop_length;
  }
  // Throws Error(kConfig) when a field is out of range.
  void Validate() const;
};

// Dense row-major matrix of doubles used between the feature stages.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// Acoustic features of one excerpt: N frames x F dims, stored in single
// precision. Column layout is static (mel + energy) | delta | delta-delta.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, double frame_rate);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double frame_rate() const { return frame_rate_; }

  float& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  float at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const float> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

  // Rows [begin, begin + count).
  FeatureMatrix Slice(std::size_t begin, std::size_t count) const;

  static FeatureMatrix FromMatrix(const Matrix& m, double frame_rate);

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double frame_rate_ = 0.0;
  std::vector<float> data_;
};

// Number of frames produced for `num_samples` samples (0 when too short).
std::size_t NumFrames(std::size_t num_samples, const FeatureConfig& config);

// Periodic Hann window of the configured frame length.
std::vector<double> HannWindow(int length);

// Frames x frame_length, each frame multiplied by the periodic Hann window.
// Throws Error(kInvalidArgument) when the wave is shorter than one frame.
Matrix FrameSignal(std::span<const double> wave, const FeatureConfig& config);

// Triangular filters on the HTK mel scale: num_mel_bins x (fft_size/2 + 1).
Matrix MelFilterbank(const FeatureConfig& config);

double HzToMel(double hz);
double MelToHz(double mel);

// Frames -> N x (num_mel_bins + 1): log mel magnitudes and log frame energy.
Matrix LogMelEnergy(const Matrix& frames, const FeatureConfig& config);

// N x D -> N x 3D with regression deltas and double deltas.
Matrix AddDeltas(const Matrix& static_features, const FeatureConfig& config);

FeatureMatrix ExtractFeatures(std::span<const double> wave,
                              const FeatureConfig& config);

}  // namespace slid::features

#endif  // SLID_FEATURES_FEATURES_H_
