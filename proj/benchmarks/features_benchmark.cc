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
#include <numbers>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "slid/features/features.h"

namespace {

void BM_ExtractFeatures(benchmark::State& state) {
  const double seconds = static_cast<double>(state.range(0));
  slid::features::FeatureConfig config;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> wave(static_cast<std::size_t>(seconds * config.sample_rate));
  for (std::size_t i = 0; i < wave.size(); ++i) {
    wave[i] = 0.3 * std::sin(2.0 * std::numbers::pi * 440.0 * i /
                             config.sample_rate) +
              noise(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(slid::features::ExtractFeatures(wave, config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(wave.size()));
}
BENCHMARK(BM_ExtractFeatures)->Arg(1)->Arg(20)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
