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

#ifndef SLID_NN_GRADIENT_CHECK_H_
#define SLID_NN_GRADIENT_CHECK_H_

#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string>

namespace slid::nn {

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Relative error |a - n| / max(|a|, |n|, floor). The floor keeps entries
// whose true derivative is essentially zero from dominating.
double RelativeError(double analytic, double numeric, double floor = 1e-6);

// Central differences on `values` (perturbed in place and restored) against
// `analytic`. `loss` must recompute the scalar from the current values. When
// `max_checks` is non-zero and smaller than values.size(), a random subset
// drawn from `rng` is checked.
GradientCheckResult CheckGradient(std::span<double> values,
                                  std::span<const double> analytic,
                                  const std::function<double()>& loss,
                                  double step = 1e-5, std::size_t max_checks = 0,
                                  std::mt19937_64* rng = nullptr);

}  // namespace slid::nn

#endif  // SLID_NN_GRADIENT_CHECK_H_
