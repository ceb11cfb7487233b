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

#include "slid/model/acoustic_model.h"

#include <string>

#include "slid/error.h"

namespace slid::model {

void AcousticConfig::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kConfig, "acoustic: " + why);
  };
  if (feature_groups < 1 || feature_bins < 1) fail("feature layout must be positive");
  if (conv_blocks < 0) fail("conv_blocks must be >= 0");
  if (conv_filters < 1) fail("conv_filters must be >= 1");
  if (kernel_size < 1 || kernel_size % 2 == 0) fail("kernel_size must be odd");
  if (pool_time < 1 || pool_freq < 1) fail("pool sizes must be >= 1");
  if (lstm_layers < 1) fail("lstm_layers must be >= 1");
  if (lstm_hidden < 1) fail("lstm_hidden must be >= 1");
  if (!(dropout >= 0 && dropout < 1)) fail("dropout must be in [0, 1)");
  if (!(recurrent_dropout >= 0 && recurrent_dropout < 1)) {
    fail("recurrent_dropout must be in [0, 1)");
  }
  if (pooled_bins() < 1) fail("pooling removes every frequency bin");
}

int AcousticConfig::pooled_bins() const {
  int bins = feature_bins;
  for (int b = 0; b < conv_blocks; ++b) bins /= pool_freq;
  return bins;
}

nn::Tensor FeaturesToConvInput(const nn::Tensor& features, int groups,
                               int bins) {
  const std::size_t n = features.rows();
  const auto g = static_cast<std::size_t>(groups);
  const auto b = static_cast<std::size_t>(bins);
  nn::Tensor x({g, n, b});
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t gi = 0; gi < g; ++gi) {
      for (std::size_t bi = 0; bi < b; ++bi) {
        x[(gi * n + t) * b + bi] = features[t * g * b + gi * b + bi];
      }
    }
  }
  return x;
}

nn::Tensor FeatureMatrixToTensor(const features::FeatureMatrix& features) {
  nn::Tensor t({features.rows(), features.cols()});
  const auto& data = features.data();
  for (std::size_t i = 0; i < data.size(); ++i) t[i] = data[i];
  return t;
}

AcousticModel::AcousticModel(const AcousticConfig& config,
                             std::size_t num_tokens, std::uint64_t seed)
    : config_(config), num_tokens_(num_tokens) {
  config_.Validate();
  if (num_tokens_ < 2) {
    throw Error(ErrorCode::kConfig, "acoustic: charset needs at least 2 tokens");
  }
  std::mt19937_64 rng(seed);
  int channels = config_.feature_groups;
  for (int b = 0; b < config_.conv_blocks; ++b) {
    const std::string name = "am/conv" + std::to_string(b + 1);
    convs_.emplace_back(name, channels, config_.conv_filters,
                        config_.kernel_size, config_.kernel_size, rng);
    relus_.emplace_back();
    pools_.emplace_back(name + "/pool", config_.pool_time, config_.pool_freq);
    channels = config_.conv_filters;
  }
  const int lstm_in =
      config_.conv_blocks == 0 ? config_.feature_groups * config_.feature_bins
                               : config_.lstm_input();
  int in = lstm_in;
  for (int l = 0; l < config_.lstm_layers; ++l) {
    lstms_.emplace_back("am/blstm" + std::to_string(l + 1), in,
                        config_.lstm_hidden, true, config_.recurrent_dropout,
                        rng);
    if (l + 1 < config_.lstm_layers) dropouts_.emplace_back(config_.dropout);
    in = 2 * config_.lstm_hidden;
  }
  output_ = nn::Dense("am/output", in, static_cast<int>(num_tokens_), rng);
}

nn::ParameterList AcousticModel::Parameters() {
  nn::ParameterList params;
  for (auto& c : convs_) c.CollectParameters(params);
  for (auto& l : lstms_) l.CollectParameters(params);
  output_.CollectParameters(params);
  return params;
}

std::size_t AcousticModel::OutputFrames(std::size_t input_frames) const {
  std::size_t n = input_frames;
  for (int b = 0; b < config_.conv_blocks; ++b) {
    n /= static_cast<std::size_t>(config_.pool_time);
  }
  return n;
}

AcousticModel::Output AcousticModel::Forward(const nn::Tensor& features,
                                             const nn::RunMode& mode) {
  const auto width =
      static_cast<std::size_t>(config_.feature_groups * config_.feature_bins);
  if (features.rank() != 2 || features.cols() != width) {
    throw Error(ErrorCode::kShapeMismatch,
                "am_forward: expected [N x " + std::to_string(width) +
                    "] features, got " + nn::ShapeString(features.shape()));
  }
  if (OutputFrames(features.rows()) == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "am_forward: " + std::to_string(features.rows()) +
                    " frames is fewer than the time pooling factor");
  }
  nn::Tensor seq;
  if (config_.conv_blocks > 0) {
    nn::Tensor x = FeaturesToConvInput(features, config_.feature_groups,
                                       config_.feature_bins);
    for (std::size_t b = 0; b < convs_.size(); ++b) {
      x = convs_[b].Forward(x, mode);
      x = relus_[b].Forward(x, mode);
      x = pools_[b].Forward(x, mode);
    }
    conv_out_shape_ = x.shape();
    const std::size_t c = x.dim(0), n = x.dim(1), f = x.dim(2);
    seq = nn::Tensor({n, c * f});
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t fi = 0; fi < f; ++fi) {
          seq[t * c * f + ch * f + fi] = x[(ch * n + t) * f + fi];
        }
      }
    }
  } else {
    seq = features;
  }
  for (std::size_t l = 0; l < lstms_.size(); ++l) {
    seq = lstms_[l].Forward(seq, mode);
    if (l < dropouts_.size()) seq = dropouts_[l].Forward(seq, mode);
  }
  Output out;
  out.logits = output_.Forward(seq, mode);
  out.probs = nn::SoftmaxRows(out.logits);
  return out;
}

nn::Tensor AcousticModel::Backward(const nn::Tensor& dlogits) {
  nn::Tensor g = output_.Backward(dlogits);
  for (std::size_t l = lstms_.size(); l-- > 0;) {
    if (l < dropouts_.size()) g = dropouts_[l].Backward(g);
    g = lstms_[l].Backward(g);
  }
  if (config_.conv_blocks == 0) return g;
  const std::size_t c = conv_out_shape_[0], n = conv_out_shape_[1],
                    f = conv_out_shape_[2];
  nn::Tensor x({c, n, f});
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t fi = 0; fi < f; ++fi) {
        x[(ch * n + t) * f + fi] = g[t * c * f + ch * f + fi];
      }
    }
  }
  for (std::size_t b = convs_.size(); b-- > 0;) {
    x = pools_[b].Backward(x);
    x = relus_[b].Backward(x);
    x = convs_[b].Backward(x);
  }
  // [groups, N, bins] -> [N, groups * bins]
  const std::size_t groups = x.dim(0), frames = x.dim(1), bins = x.dim(2);
  nn::Tensor dfeat({frames, groups * bins});
  for (std::size_t gi = 0; gi < groups; ++gi) {
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t bi = 0; bi < bins; ++bi) {
        dfeat[t * groups * bins + gi * bins + bi] = x[(gi * frames + t) * bins + bi];
      }
    }
  }
  return dfeat;
}

}  // namespace slid::model
