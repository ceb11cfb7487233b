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

#ifndef SLID_SELFTEST_H_
#define SLID_SELFTEST_H_

#include <cstdint>
#include <string>
#include <vector>

namespace slid {

struct SelfTestCase {
  std::string name;
  bool passed = false;
  std::size_t instances = 0;
  double worst = 0.0;  // largest error observed
  std::string detail;
};

struct SelfTestReport {
  std::vector<SelfTestCase> cases;
  bool passed() const;
  // One "PASS|FAIL name instances=.. worst=.. detail" line per case.
  std::string ToText() const;
};

// exp(-ctc_loss) against exhaustive path enumeration for every label
// sequence with |y| <= max_labels over alphabets of 2..max_classes tokens and
// 1..max_frames frames, random probability rows.
SelfTestCase RunCtcOracleSweep(std::uint64_t seed, int max_frames = 6,
                               int max_classes = 4, int max_labels = 3,
                               double tolerance = 1e-9);

// Central-difference checks of the CTC gradient and every layer's backward
// pass (double precision, h = 1e-5) on `instances` random configurations
// each, plus an end-to-end acoustic model + CTC check.
std::vector<SelfTestCase> RunGradientChecks(std::uint64_t seed,
                                            int instances = 10,
                                            double tolerance = 1e-4);

SelfTestReport RunSelfTest(std::uint64_t seed);

}  // namespace slid

#endif  // SLID_SELFTEST_H_
