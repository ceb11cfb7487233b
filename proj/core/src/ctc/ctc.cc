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

#include "slid/ctc/ctc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slid/error.h"
#include "slid/nn/layers.h"

namespace slid::ctc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double LogSumExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

void CheckLabels(std::span<const int> labels, std::size_t classes, int blank) {
  for (int id : labels) {
    if (id < 0 || static_cast<std::size_t>(id) >= classes || id == blank) {
      throw Error(ErrorCode::kInvalidArgument,
                  "CTC label id " + std::to_string(id) +
                      " is the blank or outside the class range");
    }
  }
}

// Whether the expanded position s may be entered from s - 2.
inline bool CanSkip(const std::vector<int>& ext, std::size_t s, int blank) {
  return s >= 2 && ext[s] != blank && ext[s] != ext[s - 2];
}

struct Lattice {
  std::vector<int> ext;
  std::vector<double> alpha;  // [T, S], includes emission at t
  double log_likelihood = kNegInf;
};

Lattice Forward(const nn::Tensor& log_probs, std::span<const int> labels,
                int blank) {
  Lattice lat;
  lat.ext = ExpandLabels(labels, blank);
  const std::size_t steps = log_probs.rows();
  const std::size_t classes = log_probs.cols();
  const std::size_t s_len = lat.ext.size();
  lat.alpha.assign(steps * s_len, kNegInf);
  auto lp = [&](std::size_t t, int k) { return log_probs[t * classes + k]; };
  lat.alpha[0] = lp(0, blank);
  if (s_len > 1) lat.alpha[1] = lp(0, lat.ext[1]);
  for (std::size_t t = 1; t < steps; ++t) {
    const double* prev = lat.alpha.data() + (t - 1) * s_len;
    double* cur = lat.alpha.data() + t * s_len;
    for (std::size_t s = 0; s < s_len; ++s) {
      double acc = prev[s];
      if (s >= 1) acc = LogSumExp(acc, prev[s - 1]);
      if (CanSkip(lat.ext, s, blank)) acc = LogSumExp(acc, prev[s - 2]);
      cur[s] = acc == kNegInf ? kNegInf : acc + lp(t, lat.ext[s]);
    }
  }
  const double* last = lat.alpha.data() + (steps - 1) * s_len;
  lat.log_likelihood = last[s_len - 1];
  if (s_len > 1) lat.log_likelihood = LogSumExp(last[s_len - 1], last[s_len - 2]);
  return lat;
}

}  // namespace

std::vector<int> ExpandLabels(std::span<const int> labels, int blank) {
  std::vector<int> ext;
  ext.reserve(2 * labels.size() + 1);
  ext.push_back(blank);
  for (int id : labels) {
    ext.push_back(id);
    ext.push_back(blank);
  }
  return ext;
}

std::size_t MinimumFrames(std::span<const int> labels) {
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) ++repeats;
  }
  return labels.size() + repeats;
}

nn::Tensor LogSoftmaxRows(const nn::Tensor& logits) {
  nn::Tensor out = logits;
  const std::size_t rows = logits.rows(), cols = logits.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = out.data() + r * cols;
    const double m = *std::max_element(row, row + cols);
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) sum += std::exp(row[c] - m);
    const double lse = m + std::log(sum);
    for (std::size_t c = 0; c < cols; ++c) row[c] -= lse;
  }
  return out;
}

CtcResult CtcLoss(const nn::Tensor& log_probs, std::span<const int> labels,
                  int blank) {
  if (log_probs.rank() != 2 || log_probs.rows() == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "CTC expects non-empty [T, C] log-probabilities, got " +
                    nn::ShapeString(log_probs.shape()));
  }
  CheckLabels(labels, log_probs.cols(), blank);
  const double inf = std::numeric_limits<double>::infinity();
  if (log_probs.rows() < MinimumFrames(labels)) return {false, inf};
  const Lattice lat = Forward(log_probs, labels, blank);
  if (lat.log_likelihood == kNegInf) return {false, inf};
  return {true, -lat.log_likelihood};
}

CtcLossGrad CtcLossAndGradient(const nn::Tensor& logits,
                               std::span<const int> labels, int blank) {
  if (logits.rank() != 2 || logits.rows() == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "CTC expects non-empty [T, C] logits, got " +
                    nn::ShapeString(logits.shape()));
  }
  CheckLabels(labels, logits.cols(), blank);
  CtcLossGrad out;
  out.grad = nn::Tensor(logits.shape());
  out.loss = std::numeric_limits<double>::infinity();
  const std::size_t steps = logits.rows();
  const std::size_t classes = logits.cols();
  if (steps < MinimumFrames(labels)) return out;

  const nn::Tensor log_probs = LogSoftmaxRows(logits);
  const Lattice lat = Forward(log_probs, labels, blank);
  if (lat.log_likelihood == kNegInf) return out;
  const std::vector<int>& ext = lat.ext;
  const std::size_t s_len = ext.size();

  // beta excludes the emission at t.
  std::vector<double> beta(steps * s_len, kNegInf);
  double* last = beta.data() + (steps - 1) * s_len;
  last[s_len - 1] = 0.0;
  if (s_len > 1) last[s_len - 2] = 0.0;
  auto lp = [&](std::size_t t, int k) { return log_probs[t * classes + k]; };
  for (std::size_t t = steps - 1; t-- > 0;) {
    const double* next = beta.data() + (t + 1) * s_len;
    double* cur = beta.data() + t * s_len;
    for (std::size_t s = 0; s < s_len; ++s) {
      double acc = next[s] == kNegInf ? kNegInf : next[s] + lp(t + 1, ext[s]);
      if (s + 1 < s_len && next[s + 1] != kNegInf) {
        acc = LogSumExp(acc, next[s + 1] + lp(t + 1, ext[s + 1]));
      }
      if (s + 2 < s_len && CanSkip(ext, s + 2, blank) && next[s + 2] != kNegInf) {
        acc = LogSumExp(acc, next[s + 2] + lp(t + 1, ext[s + 2]));
      }
      cur[s] = acc;
    }
  }

  std::vector<double> occupancy(classes);
  for (std::size_t t = 0; t < steps; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), 0.0);
    const double* a = lat.alpha.data() + t * s_len;
    const double* b = beta.data() + t * s_len;
    for (std::size_t s = 0; s < s_len; ++s) {
      if (a[s] == kNegInf || b[s] == kNegInf) continue;
      occupancy[ext[s]] += std::exp(a[s] + b[s] - lat.log_likelihood);
    }
    for (std::size_t k = 0; k < classes; ++k) {
      out.grad[t * classes + k] = std::exp(lp(t, static_cast<int>(k))) - occupancy[k];
    }
  }
  out.alignable = true;
  out.loss = -lat.log_likelihood;
  return out;
}

PhonemeSeq CollapsePath(std::span<const int> path, int blank) {
  PhonemeSeq out;
  int previous = -1;
  for (int id : path) {
    if (id != previous && id != blank) out.push_back(id);
    previous = id;
  }
  return out;
}

PhonemeSeq GreedyDecode(const nn::Tensor& posteriorgram, int blank) {
  if (posteriorgram.empty()) return {};
  const std::size_t rows = posteriorgram.rows();
  std::vector<int> path(rows);
  for (std::size_t t = 0; t < rows; ++t) {
    const auto row = posteriorgram.row(t);
    path[t] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return CollapsePath(path, blank);
}

double OracleCtcProbability(const nn::Tensor& probs,
                            std::span<const int> labels, int blank) {
  const std::size_t steps = probs.rows(), classes = probs.cols();
  double paths = 1.0;
  for (std::size_t t = 0; t < steps; ++t) paths *= static_cast<double>(classes);
  if (paths > 1e6) {
    throw Error(ErrorCode::kInvalidArgument,
                "oracle CTC: |C|^T = " + std::to_string(paths) +
                    " exceeds the 10^6 enumeration guard");
  }
  const PhonemeSeq target(labels.begin(), labels.end());
  std::vector<int> path(steps, 0);
  double total = 0.0;
  while (true) {
    if (CollapsePath(path, blank) == target) {
      double p = 1.0;
      for (std::size_t t = 0; t < steps; ++t) p *= probs[t * classes + path[t]];
      total += p;
    }
    std::size_t pos = 0;
    while (pos < steps && ++path[pos] == static_cast<int>(classes)) {
      path[pos] = 0;
      ++pos;
    }
    if (pos == steps) break;
  }
  return total;
}

std::size_t EditDistance(std::span<const int> a, std::span<const int> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace slid::ctc
