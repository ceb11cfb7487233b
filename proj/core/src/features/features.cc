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

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "slid/error.h"

namespace slid::features {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

class RealFft {
 public:
  explicit RealFft(int size) : size_(size) {
    in_ = fftw_alloc_real(size);
    out_ = fftw_alloc_complex(size / 2 + 1);
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan_ = fftw_plan_dft_r2c_1d(size, in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(PlannerMutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  // Magnitude spectrum of `frame`, zero-padded to the FFT size.
  void Magnitude(std::span<const double> frame, std::span<double> mag) {
    std::fill(in_, in_ + size_, 0.0);
    std::copy_n(frame.begin(), std::min<std::size_t>(frame.size(), size_), in_);
    fftw_execute(plan_);
    for (int k = 0; k <= size_ / 2; ++k) {
      mag[k] = std::hypot(out_[k][0], out_[k][1]);
    }
  }

 private:
  int size_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace

void FeatureConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfig, "features: " + what);
  };
  if (sample_rate <= 0) fail("sample_rate must be positive");
  if (frame_length <= 0) fail("frame_length must be positive");
  if (hop_length <= 0) fail("hop_length must be positive");
  if (fft_size < frame_length) fail("fft_size must be >= frame_length");
  if (num_mel_bins <= 0) fail("num_mel_bins must be positive");
  if (mel_low_hz < 0 || mel_high_hz <= mel_low_hz ||
      mel_high_hz > sample_rate / 2.0) {
    fail("mel range must satisfy 0 <= low < high <= nyquist");
  }
  if (!(log_floor > 0)) fail("log_floor must be positive");
  if (delta_window < 1) fail("delta_window must be >= 1");
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols,
                             double frame_rate)
    : rows_(rows), cols_(cols), frame_rate_(frame_rate), data_(rows * cols) {}

FeatureMatrix FeatureMatrix::Slice(std::size_t begin, std::size_t count) const {
  if (begin + count > rows_) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature slice [" + std::to_string(begin) + ", " +
                    std::to_string(begin + count) + ") exceeds " +
                    std::to_string(rows_) + " rows");
  }
  FeatureMatrix out(count, cols_, frame_rate_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
              count * cols_, out.data_.begin());
  return out;
}

FeatureMatrix FeatureMatrix::FromMatrix(const Matrix& m, double frame_rate) {
  FeatureMatrix out(m.rows, m.cols, frame_rate);
  std::transform(m.data.begin(), m.data.end(), out.data_.begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

std::size_t NumFrames(std::size_t num_samples, const FeatureConfig& config) {
  const auto len = static_cast<std::size_t>(config.frame_length);
  if (num_samples < len) return 0;
  return (num_samples - len) / static_cast<std::size_t>(config.hop_length) + 1;
}

std::vector<double> HannWindow(int length) {
  std::vector<double> w(length);
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

Matrix FrameSignal(std::span<const double> wave, const FeatureConfig& config) {
  const std::size_t n = NumFrames(wave.size(), config);
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "wave has " + std::to_string(wave.size()) +
                    " samples; at least " +
                    std::to_string(config.frame_length) + " are required");
  }
  const auto window = HannWindow(config.frame_length);
  Matrix frames(n, config.frame_length);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t offset = t * config.hop_length;
    for (int k = 0; k < config.frame_length; ++k) {
      frames(t, k) = wave[offset + k] * window[k];
    }
  }
  return frames;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Matrix MelFilterbank(const FeatureConfig& config) {
  const int num_bins = config.fft_size / 2 + 1;
  const int m = config.num_mel_bins;
  const double mel_lo = HzToMel(config.mel_low_hz);
  const double mel_hi = HzToMel(config.mel_high_hz);
  std::vector<double> edges(m + 2);
  for (int i = 0; i < m + 2; ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (m + 1));
  }
  Matrix fb(m, num_bins);
  const double bin_hz = static_cast<double>(config.sample_rate) / config.fft_size;
  for (int j = 0; j < m; ++j) {
    const double left = edges[j], center = edges[j + 1], right = edges[j + 2];
    for (int k = 0; k < num_bins; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      fb(j, k) = w;
    }
  }
  return fb;
}

Matrix LogMelEnergy(const Matrix& frames, const FeatureConfig& config) {
  const Matrix fb = MelFilterbank(config);
  const int num_bins = config.fft_size / 2 + 1;
  const int m = config.num_mel_bins;
  Matrix out(frames.rows, m + 1);
  RealFft fft(config.fft_size);
  std::vector<double> mag(num_bins);
  for (std::size_t t = 0; t < frames.rows; ++t) {
    const auto frame = frames.row(t);
    fft.Magnitude(frame, mag);
    for (int j = 0; j < m; ++j) {
      const auto filter = fb.row(j);
      double acc = 0.0;
      for (int k = 0; k < num_bins; ++k) acc += filter[k] * mag[k];
      out(t, j) = std::log(acc + config.log_floor);
    }
    double energy = 0.0;
    for (double v : frame) energy += v * v;
    out(t, m) = std::log(energy + config.log_floor);
  }
  return out;
}

namespace {

Matrix RegressionDeltas(const Matrix& in, int window) {
  Matrix out(in.rows, in.cols);
  if (in.rows == 0) return out;
  double denom = 0.0;
  for (int n = 1; n <= window; ++n) denom += 2.0 * n * n;
  const auto last = static_cast<std::ptrdiff_t>(in.rows) - 1;
  for (std::size_t t = 0; t < in.rows; ++t) {
    for (std::size_t c = 0; c < in.cols; ++c) {
      double acc = 0.0;
      for (int n = 1; n <= window; ++n) {
        const auto ti = static_cast<std::ptrdiff_t>(t);
        const auto fwd = std::min<std::ptrdiff_t>(ti + n, last);
        const auto bwd = std::max<std::ptrdiff_t>(ti - n, 0);
        acc += n * (in(fwd, c) - in(bwd, c));
      }
      out(t, c) = acc / denom;
    }
  }
  return out;
}

}  // namespace

Matrix AddDeltas(const Matrix& static_features, const FeatureConfig& config) {
  const Matrix d1 = RegressionDeltas(static_features, config.delta_window);
  const Matrix d2 = RegressionDeltas(d1, config.delta_window);
  const std::size_t dim = static_features.cols;
  Matrix out(static_features.rows, 3 * dim);
  for (std::size_t t = 0; t < out.rows; ++t) {
    for (std::size_t c = 0; c < dim; ++c) {
      out(t, c) = static_features(t, c);
      out(t, dim + c) = d1(t, c);
      out(t, 2 * dim + c) = d2(t, c);
    }
  }
  return out;
}

FeatureMatrix ExtractFeatures(std::span<const double> wave,
                              const FeatureConfig& config) {
  config.Validate();
  const Matrix frames = FrameSignal(wave, config);
  const Matrix logmel = LogMelEnergy(frames, config);
  return FeatureMatrix::FromMatrix(AddDeltas(logmel, config),
                                   config.frame_rate());
}

}  // namespace slid::features
