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
#include <vector>

#include "benchmark/benchmark.h"
#include "slid/ctc/ctc.h"
#include "slid/nn/tensor.h"

namespace {

// Frames of a 20 s segment after 4x time pooling and a typical token count.
void BM_CtcLossAndGradient(benchmark::State& state) {
  const std::size_t frames = static_cast<std::size_t>(state.range(0));
  const std::size_t tokens = 60;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  slid::nn::Tensor logits({frames, tokens});
  for (double& v : logits.values()) v = u(rng);
  std::vector<int> target;
  for (std::size_t i = 0; i < frames / 3; ++i) {
    target.push_back(1 + static_cast<int>(i % (tokens - 1)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(slid::ctc::CtcLossAndGradient(logits, target));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(frames));
}
BENCHMARK(BM_CtcLossAndGradient)->Arg(62)->Arg(312)->Arg(1248);

void BM_GreedyDecode(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  slid::nn::Tensor probs({312, 60});
  for (double& v : probs.values()) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(slid::ctc::GreedyDecode(probs));
}
BENCHMARK(BM_GreedyDecode);

}  // namespace

BENCHMARK_MAIN();
