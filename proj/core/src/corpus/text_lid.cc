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

#include "slid/corpus/text_lid.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "slid/error.h"
#include "slid/utf8.h"

namespace slid::corpus {

std::vector<std::u32string> ExtractNgrams(std::string_view text,
                                          int max_order) {
  std::u32string padded = U" ";
  for (char32_t cp : DecodeUtf8(text)) padded.push_back(cp);
  padded.push_back(U' ');
  std::vector<std::u32string> grams;
  for (int n = 1; n <= max_order; ++n) {
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      grams.push_back(padded.substr(i, n));
    }
  }
  return grams;
}

NgramTextLid NgramTextLid::Train(
    const std::vector<std::pair<std::string, std::string>>& texts) {
  if (texts.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "text LID needs at least one training text");
  }
  NgramTextLid lid;
  std::map<std::string, LanguageModel> by_language;
  std::set<std::u32string> vocabulary;
  for (const auto& [text, language] : texts) {
    LanguageModel& model = by_language[language];
    for (auto& gram : ExtractNgrams(text, kMaxOrder)) {
      model.counts[gram] += 1.0;
      model.total += 1.0;
      vocabulary.insert(std::move(gram));
    }
  }
  for (auto& [language, model] : by_language) {
    lid.languages_.push_back(language);
    lid.models_.push_back(std::move(model));
  }
  lid.vocabulary_size_ = vocabulary.size();
  return lid;
}

std::vector<std::pair<std::string, double>> NgramTextLid::Scores(
    std::string_view text) const {
  const auto grams = ExtractNgrams(text, kMaxOrder);
  std::vector<std::pair<std::string, double>> scores;
  const auto v = static_cast<double>(vocabulary_size_);
  for (std::size_t l = 0; l < languages_.size(); ++l) {
    const LanguageModel& model = models_[l];
    double score = 0.0;
    for (const auto& gram : grams) {
      const auto it = model.counts.find(gram);
      const double count = it == model.counts.end() ? 0.0 : it->second;
      score += std::log((count + 1.0) / (model.total + v));
    }
    scores.emplace_back(languages_[l], score);
  }
  return scores;
}

LidPrediction NgramTextLid::Predict(std::string_view text) const {
  if (text.find_first_not_of(' ') == std::string_view::npos) {
    return {"unknown", 0.0};
  }
  const auto scores = Scores(text);
  double best = -INFINITY;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].second > best) {
      best = scores[i].second;
      best_index = i;
    }
  }
  double denom = 0.0;
  for (const auto& [language, score] : scores) denom += std::exp(score - best);
  return {scores[best_index].first, 1.0 / denom};
}

}  // namespace slid::corpus
