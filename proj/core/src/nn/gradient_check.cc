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

#include "slid/nn/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "slid/error.h"

namespace slid::nn {

double RelativeError(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

GradientCheckResult CheckGradient(std::span<double> values,
                                  std::span<const double> analytic,
                                  const std::function<double()>& loss,
                                  double step, std::size_t max_checks,
                                  std::mt19937_64* rng) {
  if (values.size() != analytic.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "gradient check: value and gradient sizes differ");
  }
  std::vector<std::size_t> indices(values.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  if (max_checks != 0 && max_checks < indices.size()) {
    if (rng == nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  "gradient check: sampling requires an rng");
    }
    std::shuffle(indices.begin(), indices.end(), *rng);
    indices.resize(max_checks);
  }
  GradientCheckResult result;
  for (std::size_t i : indices) {
    const double saved = values[i];
    values[i] = saved + step;
    const double up = loss();
    values[i] = saved - step;
    const double down = loss();
    values[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double err = RelativeError(analytic[i], numeric);
    if (err >= result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_index = i;
      result.worst_analytic = analytic[i];
      result.worst_numeric = numeric;
    }
    ++result.checked;
  }
  return result;
}

}  // namespace slid::nn
