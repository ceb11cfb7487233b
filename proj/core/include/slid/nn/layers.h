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

#ifndef SLID_NN_LAYERS_H_
#define SLID_NN_LAYERS_H_

#include <cstdint>
#include <random>
#include <string>

#include "slid/nn/tensor.h"

namespace slid::nn {

// Forward-pass mode. Dropout is active only when `train` is set, and then
// draws its masks from `rng` (required).
struct RunMode {
  bool train = false;
  std::mt19937_64* rng = nullptr;
};

// Every layer caches what its backward pass needs from the latest Forward()
// call. Backward() accumulates parameter gradients into Parameter::grad and
// returns the gradient w.r.t. the layer input. Calling Backward() without a
// cached forward throws Error(kState).

// 2D convolution over [channels, time, freq] with stride 1 and "same" zero
// padding (odd kernels). Kernel [out, in, kh, kw], bias [out].
class Conv2D {
 public:
  Conv2D() = default;
  Conv2D(std::string name, int in_channels, int out_channels, int kernel_h,
         int kernel_w, std::mt19937_64& rng);

  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dy);
  void CollectParameters(ParameterList& out);

  int in_channels() const { return in_; }
  int out_channels() const { return out_; }

 private:
  std::string name_;
  int in_ = 0, out_ = 0, kh_ = 0, kw_ = 0;
  Parameter kernel_, bias_;
  Tensor input_;
  bool cached_ = false;
};

// Max pooling over [channels, time, freq] with non-overlapping windows;
// trailing rows/columns that do not fill a window are dropped.
class MaxPool2D {
 public:
  MaxPool2D() = default;
  MaxPool2D(std::string name, int pool_time, int pool_freq);

  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dy);

 private:
  std::string name_;
  int pt_ = 1, pf_ = 1;
  Shape input_shape_;
  std::vector<std::size_t> argmax_;
  bool cached_ = false;
};

class ReLU {
 public:
  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dy);

 private:
  Tensor input_;
  bool cached_ = false;
};

// Row-wise softmax over the last dimension of a rank-1 or rank-2 tensor.
class Softmax {
 public:
  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dy);

 private:
  Tensor output_;
  bool cached_ = false;
};

// Numerically stable row-wise softmax.
Tensor SoftmaxRows(const Tensor& logits);
// Vector-Jacobian product of the row softmax given its output.
Tensor SoftmaxBackward(const Tensor& probs, const Tensor& dprobs);

// Inverted dropout; identity outside training.
class Dropout {
 public:
  Dropout() = default;
  explicit Dropout(double rate);

  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dy);
  double rate() const { return rate_; }

 private:
  double rate_ = 0.0;
  std::vector<double> mask_;  // empty in eval mode
  bool cached_ = false;
};

// Affine map applied to each row: [T, in] -> [T, out] (or [in] -> [out]).
class Dense {
 public:
  Dense() = default;
  Dense(std::string name, int in_features, int out_features,
        std::mt19937_64& rng);

  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dy);
  void CollectParameters(ParameterList& out);

  int in_features() const { return in_; }
  int out_features() const { return out_; }

 private:
  std::string name_;
  int in_ = 0, out_ = 0;
  Parameter weight_, bias_;
  Tensor input_;
  bool cached_ = false;
};

// Single-direction LSTM over [T, in] with gate order (input, forget, cell,
// output). Input weights [4H, in], recurrent weights [4H, H], bias [4H] with
// the forget-gate slice initialised to 1. Recurrent dropout applies one mask
// per sequence to the previous hidden state.
class Lstm {
 public:
  Lstm() = default;
  Lstm(std::string name, int in_features, int hidden, bool reverse,
       double recurrent_dropout, std::mt19937_64& rng);

  // [T, in] -> [T, H] hidden states in input time order.
  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dh);
  void CollectParameters(ParameterList& out);

  int hidden() const { return hidden_; }

 private:
  std::string name_;
  int in_ = 0, hidden_ = 0;
  bool reverse_ = false;
  double recurrent_dropout_ = 0.0;
  Parameter w_, u_, b_;
  // Caches, in processing order.
  Tensor input_, gates_, cells_, hidden_states_, tanh_cells_;
  std::vector<double> mask_;
  bool cached_ = false;
};

// Bidirectional LSTM. With `return_sequences` the output is [T, 2H]
// (forward | backward per frame); otherwise [2H] made of the last forward
// state and the first-frame backward state, i.e. each direction's final state.
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(std::string name, int in_features, int hidden, bool return_sequences,
         double recurrent_dropout, std::mt19937_64& rng);

  Tensor Forward(const Tensor& x, const RunMode& mode);
  Tensor Backward(const Tensor& dy);
  void CollectParameters(ParameterList& out);

  int hidden() const { return forward_.hidden(); }
  int output_features() const { return 2 * forward_.hidden(); }

 private:
  std::string name_;
  bool return_sequences_ = true;
  Lstm forward_, backward_;
  std::size_t steps_ = 0;
  bool cached_ = false;
};

// Uniform Glorot initialisation.
void GlorotUniform(Tensor& t, std::size_t fan_in, std::size_t fan_out,
                   std::mt19937_64& rng);

}  // namespace slid::nn

#endif  // SLID_NN_LAYERS_H_
