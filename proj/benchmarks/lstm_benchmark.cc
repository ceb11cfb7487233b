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

#include <random>

#include "benchmark/benchmark.h"
#include "slid/nn/layers.h"
#include "slid/nn/tensor.h"

namespace {

slid::nn::Tensor RandomInput(std::size_t t, std::size_t d) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  slid::nn::Tensor x({t, d});
  for (double& v : x.values()) v = u(rng);
  return x;
}

void BM_BiLstmForward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  slid::nn::BiLstm lstm("bench", 64, hidden, true, 0.0, rng);
  const auto x = RandomInput(312, 64);
  for (auto _ : state) benchmark::DoNotOptimize(lstm.Forward(x, {}));
}
BENCHMARK(BM_BiLstmForward)->Arg(16)->Arg(64)->Arg(256);

void BM_BiLstmForwardBackward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  slid::nn::BiLstm lstm("bench", 64, hidden, true, 0.1, rng);
  const auto x = RandomInput(312, 64);
  const auto dy = RandomInput(312, 2 * static_cast<std::size_t>(hidden));
  std::mt19937_64 mask_rng(6);
  for (auto _ : state) {
    lstm.Forward(x, {true, &mask_rng});
    benchmark::DoNotOptimize(lstm.Backward(dy));
  }
}
BENCHMARK(BM_BiLstmForwardBackward)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
