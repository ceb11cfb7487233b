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

#include "slid/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include "slid/ctc/ctc.h"
#include "slid/error.h"
#include "slid/eval/metrics.h"
#include "slid/nn/adam.h"
#include "slid/nn/loss.h"
#include "parallel.h"

namespace slid::train {

void TrainConfig::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kConfig, "train: " + why);
  };
  if (!(learning_rate > 0)) fail("learning_rate must be > 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (!(lambda_phase1 >= 0) || !(lambda_phase2 >= 0)) {
    fail("lambda values must be >= 0");
  }
  if (patience < 1) fail("patience must be >= 1");
  if (max_epochs < 1) fail("max_epochs must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (!(blank_threshold > 0 && blank_threshold <= 1)) {
    fail("blank_threshold must be in (0, 1]");
  }
}

std::string EpochLog::ToLine() const {
  auto num = [](double v) {
    if (std::isnan(v)) return std::string("nan");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  return "phase=" + phase + " epoch=" + std::to_string(epoch) +
         " lambda=" + num(lambda) + " train_ctc=" + num(train_ctc) +
         " train_lid=" + num(train_lid) + " val_ctc=" + num(val_ctc) +
         " val_lid=" + num(val_lid) + " val_joint=" + num(val_joint) +
         " val_bacc=" + num(val_bacc) + " val_per=" + num(val_per) +
         " unalignable=" + std::to_string(unalignable) +
         " wall_time=" + num(wall_time);
}

std::uint64_t ItemSeed(std::uint64_t seed, int epoch, std::size_t item) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ static_cast<std::uint64_t>(epoch)) ^ item);
}

std::vector<std::vector<std::size_t>> MakeBatches(
    const std::vector<Example>& examples, int batch_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    groups[examples[i].features.rows()].push_back(i);
  }
  std::vector<std::vector<std::size_t>> batches;
  for (auto& [rows, indices] : groups) {
    std::shuffle(indices.begin(), indices.end(), rng);
    for (std::size_t b = 0; b < indices.size();
         b += static_cast<std::size_t>(batch_size)) {
      const std::size_t e =
          std::min(indices.size(), b + static_cast<std::size_t>(batch_size));
      batches.emplace_back(indices.begin() + static_cast<std::ptrdiff_t>(b),
                           indices.begin() + static_cast<std::ptrdiff_t>(e));
    }
  }
  std::shuffle(batches.begin(), batches.end(), rng);
  return batches;
}

namespace {

using internal::ForEachChunk;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

bool IsPhoneme(int id) { return id > 2; }  // not blank, space or "I"

std::vector<int> PhonemesOnly(std::span<const int> seq) {
  std::vector<int> out;
  for (int id : seq) {
    if (IsPhoneme(id)) out.push_back(id);
  }
  return out;
}

// Worker copies of the models. Worker 0 is the master itself; gradients of
// the other workers are summed into the master in worker order.
class ReplicaSet {
 public:
  ReplicaSet(model::AcousticModel* am, model::LanguageClassifier* lid,
             int workers)
      : am_(am), lid_(lid), workers_(std::max(1, workers)) {
    for (int w = 1; w < workers_; ++w) {
      if (am_ != nullptr) am_copies_.push_back(*am_);
      if (lid_ != nullptr) lid_copies_.push_back(*lid_);
    }
  }

  int size() const { return workers_; }
  model::AcousticModel* am(int w) {
    if (am_ == nullptr) return nullptr;
    return w == 0 ? am_ : &am_copies_[static_cast<std::size_t>(w - 1)];
  }
  model::LanguageClassifier* lid(int w) {
    if (lid_ == nullptr) return nullptr;
    return w == 0 ? lid_ : &lid_copies_[static_cast<std::size_t>(w - 1)];
  }

  nn::ParameterList MasterParameters(bool include_am, bool include_lid) {
    return Params(0, include_am, include_lid);
  }

  void Sync() {
    const auto master = Params(0, true, true);
    for (int w = 1; w < workers_; ++w) {
      const auto copy = Params(w, true, true);
      for (std::size_t i = 0; i < master.size(); ++i) {
        copy[i]->value = master[i]->value;
        copy[i]->grad.Fill(0.0);
      }
    }
  }

  void ReduceGrads() {
    const auto master = Params(0, true, true);
    for (int w = 1; w < workers_; ++w) {
      const auto copy = Params(w, true, true);
      for (std::size_t i = 0; i < master.size(); ++i) {
        auto dst = master[i]->grad.values();
        auto src = copy[i]->grad.values();
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
      }
    }
  }

 private:
  nn::ParameterList Params(int w, bool include_am, bool include_lid) {
    nn::ParameterList p;
    if (include_am && am(w) != nullptr) p = am(w)->Parameters();
    if (include_lid && lid(w) != nullptr) {
      auto q = lid(w)->Parameters();
      p.insert(p.end(), q.begin(), q.end());
    }
    return p;
  }

  model::AcousticModel* am_;
  model::LanguageClassifier* lid_;
  int workers_;
  std::vector<model::AcousticModel> am_copies_;
  std::vector<model::LanguageClassifier> lid_copies_;
};

struct ItemOutcome {
  bool alignable = false;
  double ctc = 0.0;
  bool has_lid = false;
  double lid = 0.0;
  int label = -1;
  int predicted = -1;
  std::size_t edit_errors = 0;
  std::size_t ref_length = 0;
  bool scored_per = false;
};

// Forward (and optionally backward) of one item; gradients scaled by `scale`.
ItemOutcome RunItem(model::AcousticModel& am, model::LanguageClassifier* lid,
                    const Example& ex, const Objective& obj, bool train,
                    bool backward, std::uint64_t seed, double scale,
                    bool score_per) {
  std::mt19937_64 rng(seed);
  const nn::RunMode mode{train, train ? &rng : nullptr};
  const auto out = am.Forward(ToTensor(ex.features), mode);
  ItemOutcome r;
  r.label = ex.label;

  nn::Tensor dlogits(out.logits.shape());
  bool any_grad = false;
  {
    auto c = ctc::CtcLossAndGradient(out.logits, ex.target, 0);
    r.alignable = c.alignable;
    if (c.alignable) {
      r.ctc = c.loss;
      if (backward && obj.ctc_weight != 0.0) {
        const double s = obj.ctc_weight * scale;
        for (std::size_t i = 0; i < dlogits.size(); ++i) {
          dlogits[i] += s * c.grad[i];
        }
        any_grad = true;
      }
    }
  }
  if (score_per && ex.segment.label.kind != corpus::SegmentKind::kInstrumental) {
    const auto hyp = PhonemesOnly(ctc::GreedyDecode(out.probs, 0));
    const auto ref = PhonemesOnly(ex.target);
    r.edit_errors = ctc::EditDistance(hyp, ref);
    r.ref_length = ref.size();
    r.scored_per = true;
  }
  if (lid != nullptr && ex.label >= 0) {
    std::vector<std::size_t> kept;
    nn::Tensor input =
        obj.clean ? model::CleanPosteriorgram(out.probs, obj.blank_threshold, 0,
                                              &kept)
                  : out.probs;
    if (!obj.clean) {
      kept.resize(out.probs.rows());
      std::iota(kept.begin(), kept.end(), 0);
    }
    if (input.rows() > 0) {
      const nn::Tensor p = lid->Forward(input, mode);
      const auto xent =
          nn::WeightedCrossEntropyWithGrad(p, ex.label, obj.class_weights);
      r.has_lid = true;
      r.lid = xent.loss;
      r.predicted = static_cast<int>(
          std::max_element(p.values().begin(), p.values().end()) -
          p.values().begin());
      if (backward && obj.lambda != 0.0) {
        nn::Tensor dp = xent.grad;
        for (double& v : dp.values()) v *= obj.lambda * scale;
        const nn::Tensor dinput = lid->Backward(dp);
        nn::Tensor dprobs(out.probs.shape());
        const std::size_t cols = out.probs.cols();
        for (std::size_t i = 0; i < kept.size(); ++i) {
          for (std::size_t c = 0; c < cols; ++c) {
            dprobs.at(kept[i], c) = dinput.at(i, c);
          }
        }
        const nn::Tensor d = nn::SoftmaxBackward(out.probs, dprobs);
        for (std::size_t i = 0; i < dlogits.size(); ++i) dlogits[i] += d[i];
        any_grad = true;
      }
    }
  }
  if (backward && any_grad) am.Backward(dlogits);
  return r;
}

std::vector<ItemOutcome> RunItems(ReplicaSet& replicas,
                                  std::span<const Example* const> items,
                                  const Objective& obj, bool train,
                                  bool backward,
                                  std::span<const std::uint64_t> seeds,
                                  double scale, bool score_per) {
  std::vector<ItemOutcome> outcomes(items.size());
  replicas.Sync();
  ForEachChunk(items.size(), replicas.size(),
               [&](int w, std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   outcomes[i] = RunItem(*replicas.am(w), replicas.lid(w),
                                         *items[i], obj, train, backward,
                                         seeds.empty() ? 0 : seeds[i], scale,
                                         score_per);
                 }
               });
  if (backward) replicas.ReduceGrads();
  return outcomes;
}

LossTerms Summarize(const std::vector<ItemOutcome>& outcomes,
                    const Objective& obj) {
  LossTerms t;
  double ctc_sum = 0.0, lid_sum = 0.0;
  for (const auto& o : outcomes) {
    ++t.items;
    if (o.alignable) {
      ctc_sum += o.ctc;
    } else {
      ++t.unalignable;
    }
    if (o.has_lid) {
      lid_sum += o.lid;
      ++t.lid_items;
    }
  }
  if (t.items > 0) {
    t.ctc = ctc_sum / t.items;
    t.lid = lid_sum / t.items;
  }
  t.total = obj.ctc_weight * t.ctc + obj.lambda * t.lid;
  return t;
}

struct ValidationMetrics {
  double ctc = kNaN;  // mean over alignable items
  double lid = kNaN;  // mean over scored items
  double joint = kNaN;
  double bacc = kNaN;
  double per = kNaN;
};

ValidationMetrics Validate(ReplicaSet& replicas,
                           std::span<const Example* const> items,
                           const Objective& obj, std::size_t num_classes,
                           bool score_per) {
  const auto outcomes =
      RunItems(replicas, items, obj, false, false, {}, 1.0, score_per);
  ValidationMetrics m;
  double ctc = 0.0, lid = 0.0;
  int aligned = 0, scored = 0;
  std::size_t errors = 0, length = 0;
  eval::ConfusionMatrix cm(num_classes);
  for (const auto& o : outcomes) {
    if (o.alignable) {
      ctc += o.ctc;
      ++aligned;
    }
    if (o.has_lid) {
      lid += o.lid;
      ++scored;
      cm.Add(o.label, o.predicted);
    }
    if (o.scored_per) {
      errors += o.edit_errors;
      length += o.ref_length;
    }
  }
  if (aligned > 0) m.ctc = ctc / aligned;
  if (scored > 0) {
    m.lid = lid / scored;
    m.bacc = eval::BalancedAccuracyOverPresent(cm).value_or(kNaN);
  }
  const double ctc_term = obj.ctc_weight == 0.0 ? 0.0 : obj.ctc_weight * m.ctc;
  const double lid_term = obj.lambda == 0.0 ? 0.0 : obj.lambda * m.lid;
  if (num_classes > 0) m.joint = ctc_term + lid_term;
  if (length > 0) {
    m.per = 100.0 * static_cast<double>(errors) / static_cast<double>(length);
  }
  return m;
}

std::vector<const Example*> Pointers(const std::vector<Example>& examples) {
  std::vector<const Example*> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(&e);
  return out;
}

std::vector<nn::Tensor> Snapshot(const nn::ParameterList& params) {
  std::vector<nn::Tensor> values;
  values.reserve(params.size());
  for (const auto* p : params) values.push_back(p->value);
  return values;
}

void Restore(const nn::ParameterList& params,
             const std::vector<nn::Tensor>& values) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i]->value = values[i];
  }
}

void CheckFinite(const LossTerms& terms, const nn::ParameterList& params,
                 const std::string& where) {
  bool ok = std::isfinite(terms.total);
  for (const auto* p : params) {
    if (!ok) break;
    ok = p->grad.AllFinite();
  }
  if (!ok) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s: non-finite loss or gradient (ctc=%g lid=%g total=%g)",
                  where.c_str(), terms.ctc, terms.lid, terms.total);
    throw Error(ErrorCode::kDivergence, buf);
  }
}

// Which validation quantity drives early stopping.
enum class StopMetric { kCtc, kJointLoss, kBalancedAccuracy };

bool Improves(StopMetric metric, const ValidationMetrics& now,
              const ValidationMetrics& best, bool first) {
  if (first) return true;
  switch (metric) {
    case StopMetric::kCtc:
      return now.ctc < best.ctc;
    case StopMetric::kJointLoss:
      return now.joint < best.joint;
    case StopMetric::kBalancedAccuracy:
      if (std::isnan(now.bacc)) return false;
      if (std::isnan(best.bacc) || now.bacc > best.bacc) return true;
      return now.bacc == best.bacc && now.lid < best.lid;
  }
  return false;
}

struct PhaseSpec {
  std::string name;
  Objective objective;
  StopMetric stop;
  bool train_am = true;
  bool train_lid = false;
  bool score_per = false;
};

// Shared epoch loop for the phases that run the acoustic model forward.
TrainResult RunPhase(model::AcousticModel& am, model::LanguageClassifier* lid,
                     const std::vector<Example>& train,
                     const std::vector<Example>& val, std::size_t num_classes,
                     const TrainConfig& config, const PhaseSpec& phase,
                     std::uint64_t phase_seed, const LogSink& sink) {
  ReplicaSet replicas(&am, lid, config.workers);
  auto params = replicas.MasterParameters(phase.train_am, phase.train_lid);
  auto all_params = replicas.MasterParameters(true, true);
  nn::Adam adam(nn::AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});
  const auto val_items = Pointers(val);

  TrainResult result;
  ValidationMetrics best;
  std::vector<nn::Tensor> best_values = Snapshot(params);
  int bad_epochs = 0;
  const auto start = Clock::now();
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto batches =
        MakeBatches(train, config.batch_size, ItemSeed(phase_seed, epoch, 0));
    double ctc_sum = 0.0, lid_sum = 0.0;
    int items = 0, unalignable = 0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      std::vector<const Example*> batch;
      std::vector<std::uint64_t> seeds;
      for (std::size_t idx : batches[b]) {
        batch.push_back(&train[idx]);
        seeds.push_back(ItemSeed(phase_seed, epoch, idx + 1));
      }
      nn::ZeroGrads(all_params);
      const auto outcomes = RunItems(replicas, batch, phase.objective, true,
                                     true, seeds, 1.0 / batch.size(), false);
      const LossTerms terms = Summarize(outcomes, phase.objective);
      CheckFinite(terms, params,
                  phase.name + " epoch " + std::to_string(epoch) + " batch " +
                      std::to_string(b));
      adam.Step(params);
      ctc_sum += terms.ctc * terms.items;
      lid_sum += terms.lid * terms.items;
      items += terms.items;
      unalignable += terms.unalignable;
    }
    const ValidationMetrics m = Validate(replicas, val_items, phase.objective,
                                         num_classes, phase.score_per);
    EpochLog log;
    log.phase = phase.name;
    log.epoch = epoch;
    log.lambda = phase.objective.lambda;
    if (items > 0) {
      log.train_ctc = ctc_sum / items;
      if (lid != nullptr) log.train_lid = lid_sum / items;
    }
    log.val_ctc = m.ctc;
    log.val_lid = m.lid;
    log.val_joint = lid != nullptr ? m.joint : kNaN;
    log.val_bacc = m.bacc;
    log.val_per = m.per;
    log.unalignable = unalignable;
    log.wall_time = Seconds(start);
    result.log.push_back(log);
    if (sink) sink(log);

    if (phase.stop == StopMetric::kCtc && !std::isfinite(m.ctc) && !val.empty()) {
      throw Error(ErrorCode::kDivergence,
                  phase.name + " epoch " + std::to_string(epoch) +
                      ": non-finite validation CTC loss");
    }
    if (Improves(phase.stop, m, best, epoch == 1)) {
      best = m;
      best_values = Snapshot(params);
      result.best_epoch = epoch;
      bad_epochs = 0;
    } else if (++bad_epochs >= config.patience) {
      break;
    }
  }
  Restore(params, best_values);
  return result;
}

}  // namespace

LossTerms JointLossOnBatch(model::AcousticModel& am,
                           model::LanguageClassifier* lid,
                           std::span<const Example* const> batch,
                           const Objective& objective, bool train,
                           bool backward,
                           std::span<const std::uint64_t> item_seeds) {
  if (batch.empty()) return {};
  ReplicaSet replicas(&am, lid, 1);
  const auto outcomes =
      RunItems(replicas, batch, objective, train, backward, item_seeds,
               1.0 / static_cast<double>(batch.size()), false);
  return Summarize(outcomes, objective);
}

TrainResult TrainAcoustic(model::AcousticModel& am,
                          const std::vector<Example>& train,
                          const std::vector<Example>& val,
                          const TrainConfig& config, const LogSink& sink) {
  config.Validate();
  if (train.empty()) {
    throw Error(ErrorCode::kDegenerate, "train_acoustic: no training segments");
  }
  PhaseSpec phase;
  phase.name = "acoustic";
  phase.objective.ctc_weight = 1.0;
  phase.objective.lambda = 0.0;
  phase.stop = StopMetric::kCtc;
  phase.score_per = true;
  return RunPhase(am, nullptr, train, val, 0, config, phase,
                  ItemSeed(config.seed, -1, 0), sink);
}

TrainResult TrainJoint(model::AcousticModel& am, model::LanguageClassifier& lid,
                       const std::vector<Example>& train,
                       const std::vector<Example>& val,
                       std::span<const double> class_weights,
                       const TrainConfig& config, double ctc_weight,
                       const LogSink& sink) {
  config.Validate();
  if (train.empty()) {
    throw Error(ErrorCode::kDegenerate, "train_joint: no training segments");
  }
  if (class_weights.size() != lid.num_languages()) {
    throw Error(ErrorCode::kInvalidArgument,
                "train_joint: one class weight per language required");
  }
  const bool e2e = ctc_weight == 0.0;
  PhaseSpec phase;
  phase.objective.ctc_weight = ctc_weight;
  phase.objective.clean = !e2e;
  phase.objective.blank_threshold = config.blank_threshold;
  phase.objective.class_weights = class_weights;
  phase.train_am = true;
  phase.train_lid = true;
  phase.score_per = !e2e;

  phase.name = e2e ? "e2e1" : "joint1";
  phase.objective.lambda = config.lambda_phase1;
  phase.stop = StopMetric::kJointLoss;
  TrainResult first = RunPhase(am, &lid, train, val, lid.num_languages(),
                               config, phase, ItemSeed(config.seed, -2, 0),
                               sink);

  phase.name = e2e ? "e2e2" : "joint2";
  phase.objective.lambda = config.lambda_phase2;
  phase.stop = StopMetric::kBalancedAccuracy;
  TrainResult second = RunPhase(am, &lid, train, val, lid.num_languages(),
                                config, phase, ItemSeed(config.seed, -3, 0),
                                sink);
  first.log.insert(first.log.end(), second.log.begin(), second.log.end());
  first.best_epoch = second.best_epoch;
  return first;
}

std::vector<nn::Tensor> ComputePosteriorgrams(
    const model::AcousticModel& am, std::span<const Example* const> examples,
    int workers) {
  std::vector<nn::Tensor> out(examples.size());
  const int w = internal::EffectiveWorkers(examples.size(), workers);
  std::vector<model::AcousticModel> copies(static_cast<std::size_t>(w), am);
  ForEachChunk(examples.size(), w,
               [&](int k, std::size_t begin, std::size_t end) {
                 auto& m = copies[static_cast<std::size_t>(k)];
                 for (std::size_t i = begin; i < end; ++i) {
                   out[i] = m.Forward(ToTensor(examples[i]->features), {}).probs;
                 }
               });
  return out;
}

TrainResult TrainLid(model::LanguageClassifier& lid, model::AcousticModel& am,
                     const std::vector<Example>& train,
                     const std::vector<Example>& val,
                     std::span<const double> class_weights,
                     const TrainConfig& config, const LogSink& sink) {
  config.Validate();
  if (class_weights.size() != lid.num_languages()) {
    throw Error(ErrorCode::kInvalidArgument,
                "train_lid: one class weight per language required");
  }
  struct LidItem {
    nn::Tensor input;
    int label;
  };
  auto prepare = [&](const std::vector<Example>& examples) {
    std::vector<const Example*> labeled;
    for (const auto& e : examples) {
      if (e.label >= 0) labeled.push_back(&e);
    }
    const auto probs = ComputePosteriorgrams(am, labeled, config.workers);
    std::vector<LidItem> items;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      nn::Tensor r = model::CleanPosteriorgram(probs[i], config.blank_threshold);
      if (r.rows() > 0) items.push_back({std::move(r), labeled[i]->label});
    }
    return items;
  };
  const auto train_items = prepare(train);
  const auto val_items = prepare(val);
  {
    std::vector<int> present(lid.num_languages(), 0);
    for (const auto& it : train_items) {
      present[static_cast<std::size_t>(it.label)] = 1;
    }
    if (std::count(present.begin(), present.end(), 1) < 2) {
      throw Error(ErrorCode::kDegenerate,
                  "train_lid: training set covers fewer than two languages");
    }
  }

  ReplicaSet replicas(nullptr, &lid, config.workers);
  auto params = lid.Parameters();
  nn::Adam adam(nn::AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});
  const std::uint64_t phase_seed = ItemSeed(config.seed, -4, 0);

  auto run = [&](const std::vector<LidItem>& items,
                 std::span<const std::size_t> order, bool training, int epoch,
                 std::vector<double>& losses, std::vector<int>& predicted) {
    losses.assign(order.size(), 0.0);
    predicted.assign(order.size(), -1);
    const double scale = 1.0 / static_cast<double>(order.size());
    replicas.Sync();
    ForEachChunk(order.size(), replicas.size(),
                 [&](int w, std::size_t begin, std::size_t end) {
                   auto& g = *replicas.lid(w);
                   for (std::size_t i = begin; i < end; ++i) {
                     const auto& item = items[order[i]];
                     std::mt19937_64 rng(
                         ItemSeed(phase_seed, epoch, order[i] + 1));
                     const nn::RunMode mode{training,
                                            training ? &rng : nullptr};
                     const nn::Tensor p = g.Forward(item.input, mode);
                     auto x = nn::WeightedCrossEntropyWithGrad(p, item.label,
                                                               class_weights);
                     losses[i] = x.loss;
                     predicted[i] = static_cast<int>(
                         std::max_element(p.values().begin(),
                                          p.values().end()) -
                         p.values().begin());
                     if (training) {
                       for (double& v : x.grad.values()) v *= scale;
                       g.Backward(x.grad);
                     }
                   }
                 });
    if (training) replicas.ReduceGrads();
  };

  TrainResult result;
  ValidationMetrics best;
  std::vector<nn::Tensor> best_values = Snapshot(params);
  int bad_epochs = 0;
  const auto start = Clock::now();
  std::vector<std::size_t> val_order(val_items.size());
  std::iota(val_order.begin(), val_order.end(), 0);
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::vector<std::size_t> order(train_items.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(ItemSeed(phase_seed, epoch, 0));
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::vector<double> losses;
    std::vector<int> predicted;
    for (std::size_t b = 0; b < order.size();
         b += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t e =
          std::min(order.size(), b + static_cast<std::size_t>(config.batch_size));
      std::span<const std::size_t> batch(order.data() + b, e - b);
      nn::ZeroGrads(params);
      run(train_items, batch, true, epoch, losses, predicted);
      LossTerms terms;
      terms.items = static_cast<int>(batch.size());
      terms.lid = std::accumulate(losses.begin(), losses.end(), 0.0) /
                  static_cast<double>(batch.size());
      terms.total = terms.lid;
      CheckFinite(terms, params,
                  "lid epoch " + std::to_string(epoch) + " batch " +
                      std::to_string(b / static_cast<std::size_t>(config.batch_size)));
      adam.Step(params);
      loss_sum += std::accumulate(losses.begin(), losses.end(), 0.0);
    }
    ValidationMetrics m;
    if (!val_items.empty()) {
      run(val_items, val_order, false, epoch, losses, predicted);
      eval::ConfusionMatrix cm(lid.num_languages());
      for (std::size_t i = 0; i < val_items.size(); ++i) {
        cm.Add(val_items[i].label, predicted[i]);
      }
      m.lid = std::accumulate(losses.begin(), losses.end(), 0.0) /
              static_cast<double>(losses.size());
      m.bacc = eval::BalancedAccuracyOverPresent(cm).value_or(kNaN);
    }
    EpochLog log;
    log.phase = "lid";
    log.epoch = epoch;
    log.lambda = 1.0;
    log.train_lid = train_items.empty()
                        ? kNaN
                        : loss_sum / static_cast<double>(train_items.size());
    log.val_lid = m.lid;
    log.val_bacc = m.bacc;
    log.wall_time = Seconds(start);
    result.log.push_back(log);
    if (sink) sink(log);
    if (Improves(StopMetric::kBalancedAccuracy, m, best, epoch == 1)) {
      best = m;
      best_values = Snapshot(params);
      result.best_epoch = epoch;
      bad_epochs = 0;
    } else if (++bad_epochs >= config.patience) {
      break;
    }
  }
  Restore(params, best_values);
  return result;
}

model::LinearClassifier TrainStatistics(
    const model::AcousticModel& am, const SplitData& train, int num_classes,
    const model::LinearClassifierConfig& linear, const TrainConfig& config) {
  config.Validate();
  const auto items = Pointers(train.examples);
  const auto probs = ComputePosteriorgrams(am, items, config.workers);
  std::vector<std::vector<nn::Tensor>> per_song(train.songs.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    per_song[items[i]->song].push_back(
        model::CleanPosteriorgram(probs[i], config.blank_threshold));
  }
  std::vector<std::vector<double>> inputs;
  std::vector<int> labels;
  for (std::size_t s = 0; s < per_song.size(); ++s) {
    if (train.song_labels[s] < 0) continue;
    std::size_t frames = 0;
    for (const auto& t : per_song[s]) frames += t.rows();
    if (frames == 0) continue;
    inputs.push_back(model::StatsPool(per_song[s]));
    labels.push_back(train.song_labels[s]);
  }
  const auto weights = ComputeClassWeights(labels, num_classes);
  return model::LinearClassifier::Train(inputs, labels, weights, num_classes,
                                        linear);
}

double PhonemeErrorRate(const model::AcousticModel& am,
                        std::span<const Example* const> examples,
                        int workers) {
  const auto probs = ComputePosteriorgrams(am, examples, workers);
  std::size_t errors = 0, length = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i]->segment.label.kind == corpus::SegmentKind::kInstrumental) {
      continue;
    }
    const auto hyp = PhonemesOnly(ctc::GreedyDecode(probs[i], 0));
    const auto ref = PhonemesOnly(examples[i]->target);
    errors += ctc::EditDistance(hyp, ref);
    length += ref.size();
  }
  if (length == 0) {
    throw Error(ErrorCode::kDegenerate,
                "phoneme error rate: no reference phonemes");
  }
  return 100.0 * static_cast<double>(errors) / static_cast<double>(length);
}

}  // namespace slid::train
