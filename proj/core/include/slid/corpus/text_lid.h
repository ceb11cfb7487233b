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

#ifndef SLID_CORPUS_TEXT_LID_H_
#define SLID_CORPUS_TEXT_LID_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slid::corpus {

struct LidPrediction {
  std::string language;
  double confidence = 0.0;  // in [0, 1]
};

// Identifies the language of a lyrics string.
class TextLanguageIdentifier {
 public:
  virtual ~TextLanguageIdentifier() = default;
  virtual LidPrediction Predict(std::string_view text) const = 0;
};

// Character n-gram (n = 1..3) multinomial naive Bayes scorer with add-one
// smoothing over the union vocabulary and a uniform language prior. The text
// is padded with one space on each side before n-gram extraction; n-grams are
// counted over Unicode codepoints. Confidence is the posterior of the top
// language.
class NgramTextLid : public TextLanguageIdentifier {
 public:
  static constexpr int kMaxOrder = 3;

  // Throws Error(kInvalidArgument) when `texts` is empty.
  static NgramTextLid Train(
      const std::vector<std::pair<std::string, std::string>>& texts);

  LidPrediction Predict(std::string_view text) const override;

  // Log-likelihood of `text` under every language, in language order.
  std::vector<std::pair<std::string, double>> Scores(
      std::string_view text) const;

  const std::vector<std::string>& languages() const { return languages_; }

 private:
  struct LanguageModel {
    std::map<std::u32string, double> counts;
    double total = 0.0;
  };

  std::vector<std::string> languages_;
  std::vector<LanguageModel> models_;
  std::size_t vocabulary_size_ = 0;
};

// Extracts every codepoint n-gram of order 1..max_order from " text ".
std::vector<std::u32string> ExtractNgrams(std::string_view text, int max_order);

}  // namespace slid::corpus

#endif  // SLID_CORPUS_TEXT_LID_H_
