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

#include <cmath>

#include "eigen_map.h"
#include "slid/error.h"
#include "slid/nn/layers.h"

namespace slid::nn {
namespace {

using internal::AsMatrix;

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Lstm::Lstm(std::string name, int in_features, int hidden, bool reverse,
           double recurrent_dropout, std::mt19937_64& rng)
    : name_(std::move(name)),
      in_(in_features),
      hidden_(hidden),
      reverse_(reverse),
      recurrent_dropout_(recurrent_dropout) {
  if (in_ <= 0 || hidden_ <= 0) {
    throw Error(ErrorCode::kConfig, name_ + ": sizes must be positive");
  }
  if (!(recurrent_dropout_ >= 0 && recurrent_dropout_ < 1)) {
    throw Error(ErrorCode::kConfig,
                name_ + ": recurrent dropout must be in [0, 1)");
  }
  const auto h4 = static_cast<std::size_t>(4 * hidden_);
  w_ = Parameter(name_ + "/input_weight",
                 Tensor({h4, static_cast<std::size_t>(in_)}));
  u_ = Parameter(name_ + "/recurrent_weight",
                 Tensor({h4, static_cast<std::size_t>(hidden_)}));
  b_ = Parameter(name_ + "/bias", Tensor({h4}));
  GlorotUniform(w_.value, in_, h4, rng);
  GlorotUniform(u_.value, hidden_, h4, rng);
  for (int j = 0; j < hidden_; ++j) b_.value[hidden_ + j] = 1.0;
}

void Lstm::CollectParameters(ParameterList& out) {
  out.push_back(&w_);
  out.push_back(&u_);
  out.push_back(&b_);
}

Tensor Lstm::Forward(const Tensor& x, const RunMode& mode) {
  if (x.rank() != 2 || x.dim(1) != static_cast<std::size_t>(in_)) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": expected input [Tx" + std::to_string(in_) +
                    "], got " + ShapeString(x.shape()));
  }
  const std::size_t steps = x.dim(0);
  const std::size_t h = hidden_;
  const std::size_t h4 = 4 * h;

  // Rows of the caches follow processing order.
  input_ = Tensor({steps, static_cast<std::size_t>(in_)});
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse_ ? steps - 1 - s : s;
    std::copy_n(x.data() + t * in_, in_, input_.data() + s * in_);
  }
  mask_.assign(h, 1.0);
  if (mode.train && recurrent_dropout_ > 0) {
    if (mode.rng == nullptr) {
      throw Error(ErrorCode::kState, name_ + ": training mode requires an rng");
    }
    std::bernoulli_distribution keep(1.0 - recurrent_dropout_);
    const double scale = 1.0 / (1.0 - recurrent_dropout_);
    for (double& m : mask_) m = keep(*mode.rng) ? scale : 0.0;
  }

  gates_ = Tensor({steps, h4});
  AsMatrix(gates_, steps, h4).noalias() =
      AsMatrix(input_, steps, in_) * AsMatrix(w_.value, h4, in_).transpose();
  cells_ = Tensor({steps, h});
  tanh_cells_ = Tensor({steps, h});
  hidden_states_ = Tensor({steps, h});

  const auto u = AsMatrix(u_.value, h4, h);
  Eigen::VectorXd prev_h = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd prev_c = Eigen::VectorXd::Zero(h);
  const Eigen::Map<const Eigen::VectorXd> mask(mask_.data(), h);
  Eigen::VectorXd z(h4);
  for (std::size_t s = 0; s < steps; ++s) {
    z.noalias() = u * prev_h.cwiseProduct(mask);
    double* g = gates_.data() + s * h4;
    for (std::size_t k = 0; k < h4; ++k) g[k] += z[k] + b_.value[k];
    double* c = cells_.data() + s * h;
    double* tc = tanh_cells_.data() + s * h;
    double* hs = hidden_states_.data() + s * h;
    for (std::size_t j = 0; j < h; ++j) {
      const double ig = Sigmoid(g[j]);
      const double fg = Sigmoid(g[h + j]);
      const double cg = std::tanh(g[2 * h + j]);
      const double og = Sigmoid(g[3 * h + j]);
      g[j] = ig;
      g[h + j] = fg;
      g[2 * h + j] = cg;
      g[3 * h + j] = og;
      c[j] = fg * prev_c[j] + ig * cg;
      tc[j] = std::tanh(c[j]);
      hs[j] = og * tc[j];
      prev_c[j] = c[j];
      prev_h[j] = hs[j];
    }
  }
  cached_ = true;

  Tensor y({steps, h});
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse_ ? steps - 1 - s : s;
    std::copy_n(hidden_states_.data() + s * h, h, y.data() + t * h);
  }
  return y;
}

Tensor Lstm::Backward(const Tensor& dh_in) {
  if (!cached_) throw Error(ErrorCode::kState, name_ + ": backward before forward");
  const std::size_t steps = input_.dim(0);
  const std::size_t h = hidden_;
  const std::size_t h4 = 4 * h;
  CheckShape(name_, {steps, h}, dh_in.shape());

  Tensor dz({steps, h4});
  Tensor prev_masked({steps, h});  // masked h_{s-1} per step
  std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0);
  const auto u = AsMatrix(u_.value, h4, h);
  Eigen::VectorXd dh_rec(h);

  for (std::size_t s = steps; s-- > 0;) {
    const std::size_t t = reverse_ ? steps - 1 - s : s;
    const double* g = gates_.data() + s * h4;
    const double* tc = tanh_cells_.data() + s * h;
    const double* dh_out = dh_in.data() + t * h;
    double* d = dz.data() + s * h4;
    for (std::size_t j = 0; j < h; ++j) {
      const double ig = g[j], fg = g[h + j], cg = g[2 * h + j], og = g[3 * h + j];
      const double c_prev = s > 0 ? cells_[(s - 1) * h + j] : 0.0;
      const double dh = dh_out[j] + dh_next[j];
      const double dc = dc_next[j] + dh * og * (1.0 - tc[j] * tc[j]);
      d[j] = dc * cg * ig * (1.0 - ig);
      d[h + j] = dc * c_prev * fg * (1.0 - fg);
      d[2 * h + j] = dc * ig * (1.0 - cg * cg);
      d[3 * h + j] = dh * tc[j] * og * (1.0 - og);
      dc_next[j] = dc * fg;
      if (s > 0) {
        prev_masked[s * h + j] = hidden_states_[(s - 1) * h + j] * mask_[j];
      }
    }
    dh_rec.noalias() =
        u.transpose() * Eigen::Map<const Eigen::VectorXd>(d, h4);
    for (std::size_t j = 0; j < h; ++j) dh_next[j] = dh_rec[j] * mask_[j];
  }

  const auto dzm = AsMatrix(dz, steps, h4);
  AsMatrix(w_.grad, h4, in_).noalias() +=
      dzm.transpose() * AsMatrix(input_, steps, in_);
  AsMatrix(u_.grad, h4, h).noalias() +=
      dzm.transpose() * AsMatrix(prev_masked, steps, h);
  AsMatrix(b_.grad, 1, h4).row(0) += dzm.colwise().sum();

  Tensor dx_proc({steps, static_cast<std::size_t>(in_)});
  AsMatrix(dx_proc, steps, in_).noalias() = dzm * AsMatrix(w_.value, h4, in_);
  Tensor dx({steps, static_cast<std::size_t>(in_)});
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse_ ? steps - 1 - s : s;
    std::copy_n(dx_proc.data() + s * in_, in_, dx.data() + t * in_);
  }
  return dx;
}

BiLstm::BiLstm(std::string name, int in_features, int hidden,
               bool return_sequences, double recurrent_dropout,
               std::mt19937_64& rng)
    : name_(std::move(name)),
      return_sequences_(return_sequences),
      forward_(name_ + "/fw", in_features, hidden, false, recurrent_dropout, rng),
      backward_(name_ + "/bw", in_features, hidden, true, recurrent_dropout,
                rng) {}

void BiLstm::CollectParameters(ParameterList& out) {
  forward_.CollectParameters(out);
  backward_.CollectParameters(out);
}

Tensor BiLstm::Forward(const Tensor& x, const RunMode& mode) {
  if (x.rank() != 2 || x.dim(0) == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": expected non-empty [TxD] input, got " +
                    ShapeString(x.shape()));
  }
  const Tensor fw = forward_.Forward(x, mode);
  const Tensor bw = backward_.Forward(x, mode);
  steps_ = x.dim(0);
  cached_ = true;
  const std::size_t h = forward_.hidden();
  if (!return_sequences_) {
    Tensor y({2 * h});
    std::copy_n(fw.data() + (steps_ - 1) * h, h, y.data());
    std::copy_n(bw.data(), h, y.data() + h);
    return y;
  }
  Tensor y({steps_, 2 * h});
  for (std::size_t t = 0; t < steps_; ++t) {
    std::copy_n(fw.data() + t * h, h, y.data() + t * 2 * h);
    std::copy_n(bw.data() + t * h, h, y.data() + t * 2 * h + h);
  }
  return y;
}

Tensor BiLstm::Backward(const Tensor& dy) {
  if (!cached_) throw Error(ErrorCode::kState, name_ + ": backward before forward");
  const std::size_t h = forward_.hidden();
  Tensor dfw({steps_, h});
  Tensor dbw({steps_, h});
  if (!return_sequences_) {
    CheckShape(name_, {2 * h}, dy.shape());
    std::copy_n(dy.data(), h, dfw.data() + (steps_ - 1) * h);
    std::copy_n(dy.data() + h, h, dbw.data());
  } else {
    CheckShape(name_, {steps_, 2 * h}, dy.shape());
    for (std::size_t t = 0; t < steps_; ++t) {
      std::copy_n(dy.data() + t * 2 * h, h, dfw.data() + t * h);
      std::copy_n(dy.data() + t * 2 * h + h, h, dbw.data() + t * h);
    }
  }
  Tensor dx = forward_.Backward(dfw);
  const Tensor dx_bw = backward_.Backward(dbw);
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dx_bw[i];
  return dx;
}

}  // namespace slid::nn
