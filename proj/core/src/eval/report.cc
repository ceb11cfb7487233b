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

#include "slid/eval/report.h"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "slid/error.h"

namespace slid::eval {

namespace {

using nlohmann::ordered_json;

double Round(double v) {
  // Fixed precision keeps the text output stable across platforms.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::stod(buf);
}

ordered_json ToJson(const ValueWithError& v) {
  return ordered_json{{"value", Round(v.value)}, {"se", Round(v.se)}};
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

EvalReport RunScenario(const std::vector<SongPrediction>& predictions,
                       const train::SplitData& split,
                       const train::Scenario& scenario,
                       const std::set<std::string>& train_languages,
                       const std::string& mode, const EvalOptions& options) {
  const auto classes = scenario.ClassNames();
  if (predictions.size() != split.songs.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "evaluate: " + std::to_string(predictions.size()) +
                    " predictions for " + std::to_string(split.songs.size()) +
                    " songs");
  }
  std::vector<SongRecord> records;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    const auto& song = split.songs[i];
    if (p.song_id != song.id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evaluate: prediction for '" + p.song_id +
                      "' where song '" + song.id + "' was expected");
    }
    if (p.predicted >= static_cast<int>(classes.size()) ||
        (p.predicted >= 0 && p.scores.size() != classes.size())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evaluate: label space mismatch for song " + song.id);
    }
    const int truth = scenario.ClassOf(song.language);
    if (truth < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evaluate: language '" + song.language + "' of song " +
                      song.id + " is outside the label space");
    }
    records.push_back(
        {truth, p.predicted, train_languages.count(song.language) == 0});
  }

  const std::size_t n_classes = classes.size();
  EvalReport r;
  r.scenario = scenario.kind;
  r.mode = mode;
  r.classes = classes;
  r.songs = static_cast<int>(records.size());
  for (const auto& rec : records) r.abstentions += rec.predicted < 0;
  r.confusion = BuildConfusion(records, n_classes);

  auto se = [&](const MetricFn& fn) {
    return BootstrapStdError(fn, records, options.resamples, options.seed);
  };
  auto defined = [n_classes](std::span<const SongRecord> s) {
    const auto cm = BuildConfusion(s, n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (cm.row_total(c) == 0) return std::optional<ConfusionMatrix>();
    }
    return std::optional<ConfusionMatrix>(cm);
  };

  r.balanced_accuracy.value = BalancedAccuracy(r.confusion);
  r.balanced_accuracy.se =
      se([&](std::span<const SongRecord> s) -> std::optional<double> {
        auto cm = defined(s);
        if (!cm) return std::nullopt;
        return BalancedAccuracy(*cm);
      });
  r.macro_f1.value = MacroF1(r.confusion);
  r.macro_f1.se = se([&](std::span<const SongRecord> s) -> std::optional<double> {
    auto cm = defined(s);
    if (!cm) return std::nullopt;
    return MacroF1(*cm);
  });
  const auto f1 = F1PerClass(r.confusion);
  for (std::size_t c = 0; c < n_classes; ++c) {
    ValueWithError v;
    v.value = f1[c];
    v.se = se([&, c](std::span<const SongRecord> s) -> std::optional<double> {
      const auto cm = BuildConfusion(s, n_classes);
      if (cm.row_total(c) == 0 && cm.column_total(c) == 0) return std::nullopt;
      return F1PerClass(cm)[c];
    });
    r.f1.push_back(v);
  }

  if (scenario.open()) {
    const int others = static_cast<int>(n_classes) - 1;
    std::vector<int> targets(static_cast<std::size_t>(others));
    for (int c = 0; c < others; ++c) targets[static_cast<std::size_t>(c)] = c;
    ValueWithError t;
    t.value = MacroF1Over(r.confusion, targets);
    t.se = se([&](std::span<const SongRecord> s) -> std::optional<double> {
      auto cm = defined(s);
      if (!cm) return std::nullopt;
      return MacroF1Over(*cm, targets);
    });
    r.target_macro_f1 = t;
    r.others_f1 = r.f1[static_cast<std::size_t>(others)];

    int in_total = 0, in_hit = 0, out_total = 0, out_hit = 0;
    for (const auto& rec : records) {
      if (rec.truth != others) continue;
      const bool hit = rec.predicted == others;
      if (rec.out_of_domain) {
        ++out_total;
        out_hit += hit;
      } else {
        ++in_total;
        in_hit += hit;
      }
    }
    r.others_in_domain_songs = in_total;
    r.others_out_of_domain_songs = out_total;
    if (in_total > 0) r.others_in_domain_accuracy = 100.0 * in_hit / in_total;
    if (out_total > 0) {
      r.others_out_of_domain_accuracy = 100.0 * out_hit / out_total;
    }
  }
  return r;
}

std::string EvalReport::ToJson() const {
  ordered_json j;
  j["scenario"] = scenario;
  j["mode"] = mode;
  j["classes"] = classes;
  j["songs"] = songs;
  j["abstentions"] = abstentions;
  j["balanced_accuracy"] = eval::ToJson(balanced_accuracy);
  j["macro_f1"] = eval::ToJson(macro_f1);
  ordered_json per_class = ordered_json::object();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    per_class[classes[c]] = eval::ToJson(f1[c]);
  }
  j["f1"] = per_class;
  if (target_macro_f1) j["target_macro_f1"] = eval::ToJson(*target_macro_f1);
  if (others_f1) j["others_f1"] = eval::ToJson(*others_f1);
  if (scenario == "open") {
    j["others_in_domain_accuracy"] =
        others_in_domain_accuracy ? ordered_json(Round(*others_in_domain_accuracy))
                                  : ordered_json(nullptr);
    j["others_in_domain_songs"] = others_in_domain_songs;
    j["others_out_of_domain_accuracy"] =
        others_out_of_domain_accuracy
            ? ordered_json(Round(*others_out_of_domain_accuracy))
            : ordered_json(nullptr);
    j["others_out_of_domain_songs"] = others_out_of_domain_songs;
  }
  ordered_json cm = ordered_json::array();
  for (std::size_t t = 0; t < confusion.classes(); ++t) {
    ordered_json row = ordered_json::array();
    for (std::size_t p = 0; p < confusion.classes(); ++p) {
      row.push_back(confusion.count(t, p));
    }
    row.push_back(confusion.abstained(t));
    cm.push_back(row);
  }
  j["confusion"] = cm;  // rows = truth; last column = abstentions
  return j.dump(2) + "\n";
}

std::string EvalReport::ToTable() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "scenario %s  mode %s  songs %d  abstentions %d\n",
                scenario.c_str(), mode.c_str(), songs, abstentions);
  out << line;
  auto row = [&](const std::string& name, const std::string& value,
                 const std::string& se) {
    std::snprintf(line, sizeof(line), "%-30s %10s %10s\n", name.c_str(),
                  value.c_str(), se.c_str());
    out << line;
  };
  row("metric", "value", "se");
  row("balanced_accuracy", Fixed(balanced_accuracy.value),
      Fixed(balanced_accuracy.se));
  row("macro_f1", Fixed(macro_f1.value), Fixed(macro_f1.se));
  for (std::size_t c = 0; c < classes.size(); ++c) {
    row("f1[" + classes[c] + "]", Fixed(f1[c].value), Fixed(f1[c].se));
  }
  if (target_macro_f1) {
    row("target_macro_f1", Fixed(target_macro_f1->value),
        Fixed(target_macro_f1->se));
  }
  if (others_f1) row("others_f1", Fixed(others_f1->value), Fixed(others_f1->se));
  if (scenario == "open") {
    row("others_in_domain_accuracy",
        others_in_domain_accuracy ? Fixed(*others_in_domain_accuracy) : "n/a",
        "n=" + std::to_string(others_in_domain_songs));
    row("others_out_of_domain_accuracy",
        others_out_of_domain_accuracy ? Fixed(*others_out_of_domain_accuracy)
                                      : "n/a",
        "n=" + std::to_string(others_out_of_domain_songs));
  }
  out << "confusion (rows = truth, last column = abstentions)\n";
  for (std::size_t t = 0; t < confusion.classes(); ++t) {
    std::snprintf(line, sizeof(line), "%-12s", classes[t].c_str());
    out << line;
    for (std::size_t p = 0; p < confusion.classes(); ++p) {
      std::snprintf(line, sizeof(line), " %6lld",
                    static_cast<long long>(confusion.count(t, p)));
      out << line;
    }
    std::snprintf(line, sizeof(line), " %6lld\n",
                  static_cast<long long>(confusion.abstained(t)));
    out << line;
  }
  return out.str();
}

}  // namespace slid::eval
