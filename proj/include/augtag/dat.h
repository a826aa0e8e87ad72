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

#ifndef AUGTAG_DAT_H_
#define AUGTAG_DAT_H_

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "augtag/base_tagger.h"
#include "augtag/corpus.h"
#include "augtag/features.h"
#include "augtag/nncore.h"

namespace augtag {

// Augmented tagger: a Q-network over (context vector, candidate label)
// states whose actions are labels. It is trained with experience replay
// against rewards derived from the base tagger's distributions, and at
// inference relabels the tokens the base tagger was unsure about.

// State for one token: the n-gram averaged vector plus a candidate label.
// `encoded` is ngram ++ one_hot(label) and is what the Q-network reads.
struct DatState {
  std::vector<double> ngram;
  LabelId label = kNoLabel;
  std::vector<double> encoded;

  bool operator==(const DatState &) const = default;
};

DatState MakeState(std::span<const double> ngram, LabelId label,
                   int num_labels);
DatState MakeState(const Sentence &sentence, int i, LabelId label,
                   const EmbeddingTable &table, int n, int num_labels);

// Applies action `action`: same n-gram vector, label replaced.
DatState Transition(const DatState &state, LabelId action);

std::vector<double> OneHot(LabelId label, int num_labels);

// r = tanh(ln(|o_true - p| / (|o_state - o_true| + eps)))
//
// Higher when the state's label is closer to the truth than the base
// tagger's distribution is. A perfect base prediction makes the log
// argument 0, and the reward takes its limit -1. Throws
// ValidationError for malformed one-hots or a non-distribution p.
double Reward(std::span<const double> o_true, std::span<const double> o_state,
              std::span<const double> p, double epsilon);
double Reward(LabelId truth, LabelId state_label, std::span<const double> p,
              double epsilon);

struct Experience {
  DatState state;
  double reward = 0.0;
  LabelId action = kNoLabel;
  DatState next;
  // Set when the episode ended with this transition; the TD target then
  // has no bootstrap term.
  bool terminal = false;
};

// Throws ValidationError if next != Transition(state, action) or the reward
// is outside [-1, 1].
void CheckExperience(const Experience &e);

// Bounded FIFO of experiences; index 0 is the oldest.
class ReplayMemory {
 public:
  static constexpr size_t kDefaultCapacity = 5000;

  explicit ReplayMemory(size_t capacity = kDefaultCapacity);

  void Push(Experience e);
  const Experience &Sample(std::mt19937_64 &rng) const;

  size_t size() const { return items_.size(); }
  size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  const Experience &operator[](size_t i) const { return items_.at(i); }

 private:
  size_t capacity_;
  std::deque<Experience> items_;
};

struct EpisodeBudget {
  int max_steps = 1;

  // Two steps per label.
  static EpisodeBudget ForLabels(int num_labels) {
    return EpisodeBudget{2 * num_labels};
  }
  void Validate() const;
};

struct DatConfig {
  double gamma = 0.9;
  double reward_epsilon = 1e-8;
  int ngram = 3;
  double threshold = 0.95;
  std::vector<int> hidden{100, 100};
  Activation activation = Activation::kTanh;
  size_t memory_capacity = ReplayMemory::kDefaultCapacity;
  // Replay updates per environment step.
  int batch_size = 16;
  // Episodes.
  int epochs = 4000;
  // 0 selects EpisodeBudget::ForLabels.
  int max_steps = 0;
  // Probability of a uniformly random action while training.
  double exploration = 0.0;
  OptimizerConfig optimizer{OptimizerKind::kAdam, 1e-3, 16};
  uint64_t init_seed = 1;
  uint64_t replay_seed = 2;

  void Validate() const;
};

struct DatModel {
  DenseNet qnet;
  double gamma = 0.9;
  double reward_epsilon = 1e-8;
  int ngram = 3;
  double threshold = 0.95;

  // Fresh Q-network of shape {dim + w, hidden..., w}.
  static DatModel Create(int embedding_dim, int num_labels,
                         const DatConfig &config, uint64_t seed);

  int num_labels() const { return qnet.output_size(); }
  int embedding_dim() const { return qnet.input_size() - num_labels(); }
  std::vector<double> QValues(const DatState &state) const;

  bool operator==(const DatModel &) const = default;
};

// Greedy action, lowest label id on ties.
LabelId SelectAction(const DatModel &model, const DatState &state);

struct TdLoss {
  double loss = 0.0;
  double target = 0.0;
  double estimate = 0.0;
};

// (r + gamma * max_a' Q(s', a') - Q(s, a))^2, target held constant; the
// bootstrap term is dropped for terminal experiences.
TdLoss ComputeTdLoss(const DatModel &model, const Experience &e, double gamma);

struct UpdateRecord {
  int64_t iteration = 0;
  int episode = 0;
  double loss = 0.0;
};

struct EpisodeRecord {
  int episode = 0;
  int length = 0;
  double epsilon = 0.0;
  bool reached_gold = false;
};

struct DatTrainResult {
  DatModel model;
  std::vector<UpdateRecord> updates;
  std::vector<EpisodeRecord> episodes;
};

// Experience-replay training. Each episode starts from a uniformly drawn
// training token with a uniformly drawn label and steps greedily until the
// label equals the gold label or the step budget runs out; every step
// pushes one experience and then performs batch_size single-experience
// updates on uniformly sampled replay entries.
DatTrainResult TrainDat(const DatConfig &config, const Corpus &train,
                        const PredictionSet &predictions,
                        const EmbeddingTable &embeddings);

// One JSON object per line: {"type":"update",...} and {"type":"episode",...}.
void WriteTrainingLog(const DatTrainResult &result, std::ostream &out);

// Starting from `state`, follows greedy actions until the action equals the
// current label or the budget is spent. Returns the final label.
LabelId RelabelFrom(const DatModel &model, DatState state,
                    const EpisodeBudget &budget);

// Relabels each filtered token, starting from the base tagger's argmax.
// Tokens are processed in parallel.
std::vector<LabelId> Relabel(const DatModel &model, const Corpus &corpus,
                             std::span<const TokenRef> filtered,
                             const PredictionSet &predictions,
                             const EmbeddingTable &embeddings,
                             const EpisodeBudget &budget);

// Confident tokens keep the base argmax, filtered tokens take
// `dat_labels` (parallel to filter.filtered). Throws ValidationError when
// the two token sets overlap or leave a gap.
PredictionSet CombineOutputs(const PredictionSet &base,
                             const FilterResult &filter,
                             std::span<const LabelId> dat_labels);

}  // namespace augtag

#endif  // AUGTAG_DAT_H_
