// Copyright 2026 The Augtag Authors.
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

#include "augtag/dat.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "augtag/errors.h"
#include "json.hpp"

namespace augtag {
namespace {

void CheckOneHot(std::span<const double> v, const char *what) {
  int ones = 0;
  for (double x : v) {
    if (x == 1.0) {
      ++ones;
    } else if (x != 0.0) {
      throw ValidationError(std::string(what) + " is not a one-hot vector");
    }
  }
  if (ones != 1) {
    throw ValidationError(std::string(what) + " is not a one-hot vector");
  }
}

double Distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

std::vector<double> OneHot(LabelId label, int num_labels) {
  if (label < 0 || label >= num_labels) {
    throw ValidationError("label " + std::to_string(label) +
                          " outside an inventory of " +
                          std::to_string(num_labels));
  }
  std::vector<double> v(num_labels, 0.0);
  v[label] = 1.0;
  return v;
}

DatState MakeState(std::span<const double> ngram, LabelId label,
                   int num_labels) {
  DatState state;
  state.ngram.assign(ngram.begin(), ngram.end());
  state.label = label;
  state.encoded = state.ngram;
  auto one_hot = OneHot(label, num_labels);
  state.encoded.insert(state.encoded.end(), one_hot.begin(), one_hot.end());
  return state;
}

DatState MakeState(const Sentence &sentence, int i, LabelId label,
                   const EmbeddingTable &table, int n, int num_labels) {
  return MakeState(NGramAverage(sentence, i, n, table), label, num_labels);
}

DatState Transition(const DatState &state, LabelId action) {
  const int w = static_cast<int>(state.encoded.size() - state.ngram.size());
  if (action < 0 || action >= w) {
    throw ValidationError("action " + std::to_string(action) +
                          " is not a label");
  }
  DatState next = state;
  next.encoded[state.ngram.size() + state.label] = 0.0;
  next.encoded[state.ngram.size() + action] = 1.0;
  next.label = action;
  return next;
}

double Reward(std::span<const double> o_true, std::span<const double> o_state,
              std::span<const double> p, double epsilon) {
  if (o_true.size() != p.size() || o_state.size() != p.size()) {
    throw ValidationError("reward inputs differ in length");
  }
  if (!(epsilon > 0.0)) throw ValidationError("reward epsilon must be positive");
  CheckOneHot(o_true, "true label");
  CheckOneHot(o_state, "state label");
  CheckDistribution(p);
  const double x = Distance(o_true, p) / (Distance(o_state, o_true) + epsilon);
  // tanh(ln x) = (x^2 - 1) / (x^2 + 1), written so that x = 0 gives -1 and
  // an overflowing x^2 gives +1.
  return 1.0 - 2.0 / (1.0 + x * x);
}

double Reward(LabelId truth, LabelId state_label, std::span<const double> p,
              double epsilon) {
  const int w = static_cast<int>(p.size());
  return Reward(OneHot(truth, w), OneHot(state_label, w), p, epsilon);
}

void CheckExperience(const Experience &e) {
  if (e.next.label != e.action || e.next.ngram != e.state.ngram ||
      e.next != Transition(e.state, e.action)) {
    throw ValidationError("next state is not the action applied to the state");
  }
  if (!(e.reward >= -1.0 && e.reward <= 1.0)) {
    throw ValidationError("reward outside [-1, 1]");
  }
}

ReplayMemory::ReplayMemory(size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw ValidationError("replay memory capacity must be positive");
  }
}

void ReplayMemory::Push(Experience e) {
  CheckExperience(e);
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(e));
}

const Experience &ReplayMemory::Sample(std::mt19937_64 &rng) const {
  if (items_.empty()) throw std::logic_error("sampling an empty replay memory");
  std::uniform_int_distribution<size_t> pick(0, items_.size() - 1);
  return items_[pick(rng)];
}

void EpisodeBudget::Validate() const {
  if (max_steps < 1) throw ValidationError("episode budget must be at least 1");
}

void DatConfig::Validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("gamma must lie in (0, 1)");
  }
  if (!(reward_epsilon > 0.0)) {
    throw ValidationError("reward epsilon must be positive");
  }
  NGramConfig{ngram}.Validate();
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("threshold must lie in [0, 1]");
  }
  for (int h : hidden) {
    if (h <= 0) throw ValidationError("hidden sizes must be positive");
  }
  if (memory_capacity == 0) {
    throw ValidationError("replay memory capacity must be positive");
  }
  if (batch_size <= 0) throw ValidationError("batch size must be positive");
  if (epochs < 0) throw ValidationError("epochs must be non-negative");
  if (max_steps < 0) throw ValidationError("max steps must be non-negative");
  if (!(exploration >= 0.0 && exploration <= 1.0)) {
    throw ValidationError("exploration rate must lie in [0, 1]");
  }
  optimizer.Validate();
}

DatModel DatModel::Create(int embedding_dim, int num_labels,
                          const DatConfig &config, uint64_t seed) {
  config.Validate();
  if (embedding_dim <= 0 || num_labels <= 0) {
    throw ValidationError("state dimensions must be positive");
  }
  std::vector<int> sizes{embedding_dim + num_labels};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(num_labels);
  DatModel model;
  model.qnet = DenseNet(sizes, config.activation, seed);
  model.gamma = config.gamma;
  model.reward_epsilon = config.reward_epsilon;
  model.ngram = config.ngram;
  model.threshold = config.threshold;
  return model;
}

std::vector<double> DatModel::QValues(const DatState &state) const {
  return qnet.Forward(state.encoded);
}

LabelId SelectAction(const DatModel &model, const DatState &state) {
  return ArgMax(model.QValues(state));
}

TdLoss ComputeTdLoss(const DatModel &model, const Experience &e,
                     double gamma) {
  TdLoss out;
  out.estimate = model.QValues(e.state).at(e.action);
  out.target = e.reward;
  if (!e.terminal) {
    auto next_q = model.QValues(e.next);
    out.target += gamma * *std::max_element(next_q.begin(), next_q.end());
  }
  const double diff = out.target - out.estimate;
  out.loss = diff * diff;
  return out;
}

DatTrainResult TrainDat(const DatConfig &config, const Corpus &train,
                        const PredictionSet &predictions,
                        const EmbeddingTable &embeddings) {
  config.Validate();
  if (train.num_tokens() == 0) throw ValidationError("training corpus is empty");
  const int w = train.inventory.size();
  if (predictions.num_labels() != w) {
    throw ValidationError("predictions and corpus disagree on the label count");
  }
  const EpisodeBudget budget = config.max_steps > 0
                                   ? EpisodeBudget{config.max_steps}
                                   : EpisodeBudget::ForLabels(w);

  std::mt19937_64 rng(config.init_seed);
  std::mt19937_64 replay_rng(config.replay_seed);
  DatTrainResult result;
  result.model = DatModel::Create(embeddings.dim(), w, config, rng());
  DatModel &model = result.model;
  Optimizer optimizer(config.optimizer);
  ReplayMemory memory(config.memory_capacity);

  std::vector<std::vector<int>> rows;
  std::vector<TokenRef> tokens;
  for (int s = 0; s < static_cast<int>(train.sentences.size()); ++s) {
    rows.push_back(LookupRows(train.sentences[s], embeddings));
    for (int t = 0; t < train.sentences[s].size(); ++t) tokens.push_back({s, t});
  }
  std::uniform_int_distribution<size_t> pick_token(0, tokens.size() - 1);
  std::uniform_int_distribution<LabelId> pick_label(0, w - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<double> output_grad(w, 0.0);
  int64_t iteration = 0;
  for (int episode = 0; episode < config.epochs; ++episode) {
    const TokenRef ref = tokens[pick_token(rng)];
    const LabelId gold = train.sentences[ref.sentence].tokens[ref.token].gold_label;
    const auto &probs = predictions.at(ref.sentence, ref.token).probs;
    DatState state = MakeState(
        NGramAverage(rows[ref.sentence], ref.token, config.ngram, embeddings),
        pick_label(rng), w);

    int steps = 0;
    while (state.label != gold && steps < budget.max_steps) {
      LabelId action = SelectAction(model, state);
      if (config.exploration > 0.0 && coin(rng) < config.exploration) {
        action = pick_label(rng);
      }
      Experience e;
      e.reward = Reward(gold, state.label, probs, config.reward_epsilon);
      e.action = action;
      e.next = Transition(state, action);
      e.terminal = action == gold || steps + 1 == budget.max_steps;
      e.state = std::move(state);
      state = e.next;
      memory.Push(std::move(e));
      ++steps;

      for (int b = 0; b < config.batch_size; ++b) {
        const Experience &sample = memory.Sample(replay_rng);
        double target = sample.reward;
        if (!sample.terminal) {
          auto next_q = model.QValues(sample.next);
          target += model.gamma * *std::max_element(next_q.begin(), next_q.end());
        }
        ForwardCache cache;
        auto q = model.qnet.Forward(sample.state.encoded, &cache);
        const double diff = q[sample.action] - target;
        std::fill(output_grad.begin(), output_grad.end(), 0.0);
        output_grad[sample.action] = 2.0 * diff;
        optimizer.Step(model.qnet, model.qnet.Backward(cache, output_grad));
        result.updates.push_back({++iteration, episode, diff * diff});
      }
    }
    result.episodes.push_back(
        {episode, steps, config.exploration, state.label == gold});
  }
  return result;
}

void WriteTrainingLog(const DatTrainResult &result, std::ostream &out) {
  size_t u = 0;
  for (const auto &ep : result.episodes) {
    for (; u < result.updates.size() && result.updates[u].episode == ep.episode;
         ++u) {
      const auto &up = result.updates[u];
      nlohmann::json record = {{"type", "update"},
                               {"iteration", up.iteration},
                               {"episode", up.episode},
                               {"loss", up.loss}};
      out << record.dump() << '\n';
    }
    nlohmann::json record = {{"type", "episode"},
                             {"episode", ep.episode},
                             {"episode_length", ep.length},
                             {"epsilon", ep.epsilon},
                             {"reached_gold", ep.reached_gold}};
    out << record.dump() << '\n';
  }
}

LabelId RelabelFrom(const DatModel &model, DatState state,
                    const EpisodeBudget &budget) {
  budget.Validate();
  for (int step = 0; step < budget.max_steps; ++step) {
    const LabelId action = SelectAction(model, state);
    if (action == state.label) break;
    state = Transition(state, action);
  }
  return state.label;
}

std::vector<LabelId> Relabel(const DatModel &model, const Corpus &corpus,
                             std::span<const TokenRef> filtered,
                             const PredictionSet &predictions,
                             const EmbeddingTable &embeddings,
                             const EpisodeBudget &budget) {
  budget.Validate();
  const int w = model.num_labels();
  if (embeddings.dim() != model.embedding_dim()) {
    throw ValidationError("embedding dim does not match the DAT model");
  }
  for (const auto &ref : filtered) {
    if (ref.sentence < 0 ||
        ref.sentence >= static_cast<int>(corpus.sentences.size()) ||
        ref.token < 0 || ref.token >= corpus.sentences[ref.sentence].size()) {
      throw ValidationError("filtered token outside the corpus");
    }
    predictions.at(ref.sentence, ref.token);
  }
  std::vector<LabelId> out(filtered.size(), kNoLabel);
  const long n = static_cast<long>(filtered.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long k = 0; k < n; ++k) {
    const TokenRef ref = filtered[k];
    const Sentence &sentence = corpus.sentences[ref.sentence];
    auto rows = LookupRows(sentence, embeddings);
    auto ngram = NGramAverage(rows, ref.token, model.ngram, embeddings);
    const LabelId start = ArgMax(predictions.sentences[ref.sentence][ref.token].probs);
    out[k] = RelabelFrom(model, MakeState(ngram, start, w), budget);
  }
  return out;
}

PredictionSet CombineOutputs(const PredictionSet &base,
                             const FilterResult &filter,
                             std::span<const LabelId> dat_labels) {
  if (dat_labels.size() != filter.filtered.size()) {
    throw ValidationError("one DAT label is required per filtered token");
  }
  std::vector<std::vector<int8_t>> seen(base.sentences.size());
  for (size_t s = 0; s < base.sentences.size(); ++s) {
    seen[s].assign(base.sentences[s].size(), 0);
  }
  auto mark = [&](const TokenRef &ref) {
    if (ref.sentence < 0 || ref.sentence >= static_cast<int>(seen.size()) ||
        ref.token < 0 ||
        ref.token >= static_cast<int>(seen[ref.sentence].size())) {
      throw ValidationError("token reference outside the prediction set");
    }
    if (seen[ref.sentence][ref.token]++ != 0) {
      throw ValidationError("token (" + std::to_string(ref.sentence) + ", " +
                            std::to_string(ref.token) +
                            ") is both confident and filtered");
    }
  };
  PredictionSet combined = base;
  for (const auto &ref : filter.confident) {
    mark(ref);
    auto &p = combined.sentences[ref.sentence][ref.token];
    p.label = ArgMax(p.probs);
    p.source = LabelSource::kBase;
  }
  for (size_t k = 0; k < filter.filtered.size(); ++k) {
    const auto &ref = filter.filtered[k];
    mark(ref);
    if (dat_labels[k] < 0 || dat_labels[k] >= base.num_labels()) {
      throw ValidationError("DAT label out of range");
    }
    auto &p = combined.sentences[ref.sentence][ref.token];
    p.label = dat_labels[k];
    p.source = LabelSource::kDat;
  }
  for (size_t s = 0; s < seen.size(); ++s) {
    for (size_t t = 0; t < seen[s].size(); ++t) {
      if (seen[s][t] == 0) {
        throw ValidationError("token (" + std::to_string(s) + ", " +
                              std::to_string(t) +
                              ") is neither confident nor filtered");
      }
    }
  }
  return combined;
}

}  // namespace augtag
