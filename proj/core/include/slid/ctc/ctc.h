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

#ifndef SLID_CTC_CTC_H_
#define SLID_CTC_CTC_H_

#include <span>
#include <vector>

#include "slid/corpus/charset.h"
#include "slid/nn/tensor.h"

namespace slid::ctc {

using corpus::PhonemeSeq;

// Blank-interleaved label sequence: [b, y1, b, y2, ..., yn, b].
std::vector<int> ExpandLabels(std::span<const int> labels, int blank = 0);

// Minimum number of frames needed to emit `labels`: |y| plus one blank per
// pair of equal consecutive labels.
std::size_t MinimumFrames(std::span<const int> labels);

struct CtcResult {
  // False when the label sequence cannot be emitted in the available frames;
  // `loss` is then +infinity and callers skip the sample.
  bool alignable = false;
  double loss = 0.0;  // -log P(labels | input)
};

struct CtcLossGrad {
  bool alignable = false;
  double loss = 0.0;
  nn::Tensor grad;  // d loss / d logits, [T, C]; zero when unalignable
};

// Negative log-likelihood from per-frame log-probabilities [T, C] via the
// log-space forward recursion.
CtcResult CtcLoss(const nn::Tensor& log_probs, std::span<const int> labels,
                  int blank = 0);

// Loss and gradient w.r.t. pre-softmax logits [T, C]: softmax(logits) minus
// the per-frame label occupancy from the forward-backward recursions. All
// recursions run in double precision log space.
CtcLossGrad CtcLossAndGradient(const nn::Tensor& logits,
                               std::span<const int> labels, int blank = 0);

// Per-frame argmax, collapse repeats, drop blanks.
PhonemeSeq GreedyDecode(const nn::Tensor& posteriorgram, int blank = 0);

// Collapse a frame-level path: merge repeats, then remove blanks.
PhonemeSeq CollapsePath(std::span<const int> path, int blank = 0);

// Sums the probability of every length-T path whose collapse equals `labels`,
// by enumeration. Throws Error(kInvalidArgument) when C^T exceeds 10^6.
double OracleCtcProbability(const nn::Tensor& probs,
                            std::span<const int> labels, int blank = 0);

// Log-softmax of each row.
nn::Tensor LogSoftmaxRows(const nn::Tensor& logits);

// Levenshtein distance between two id sequences.
std::size_t EditDistance(std::span<const int> a, std::span<const int> b);

}  // namespace slid::ctc

#endif  // SLID_CTC_CTC_H_
