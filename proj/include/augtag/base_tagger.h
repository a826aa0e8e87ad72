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

#ifndef AUGTAG_BASE_TAGGER_H_
#define AUGTAG_BASE_TAGGER_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "augtag/corpus.h"
#include "augtag/features.h"
#include "augtag/nncore.h"

namespace augtag {

using Distribution = std::vector<double>;

// Which tagger assigned a token's final label.
enum class LabelSource : uint8_t { kBase = 0, kDat = 1 };

struct TokenPrediction {
  Distribution probs;
  LabelId gold = kNoLabel;
  // kNoLabel means "argmax of probs".
  LabelId label = kNoLabel;
  LabelSource source = LabelSource::kBase;

  bool operator==(const TokenPrediction &) const = default;
};

// Per-token label distributions over `labels`, aligned with a corpus.
struct PredictionSet {
  std::vector<std::string> labels;
  std::vector<std::vector<TokenPrediction>> sentences;

  int num_labels() const { return static_cast<int>(labels.size()); }
  int64_t num_tokens() const;
  const TokenPrediction &at(int sentence, int token) const;
  // Assigned label, or the argmax when none was assigned.
  LabelId PredictedLabel(int sentence, int token) const;
  std::vector<std::vector<LabelId>> PredictedLabels() const;

  bool operator==(const PredictionSet &) const = default;
};

// Argmax with ties going to the lowest index.
LabelId ArgMax(std::span<const double> values);

// Throws ValidationError unless `p` is non-negative and sums to 1 within
// `tolerance`.
void CheckDistribution(std::span<const double> p, double tolerance = 1e-6);

// Prediction file: a header naming the label order, then one tab-separated
// record per token:
//   sentence  token  gold|-  predicted|-  dnn|dat  p_1 ... p_w
// Probabilities are written with 17 significant digits, so a file
// round-trips bit-exactly. External taggers can produce this file to plug
// into the augmented tagger.
void WritePredictions(const PredictionSet &predictions, std::ostream &out);
PredictionSet ReadPredictions(std::istream &in);
PredictionSet LoadPredictions(const std::string &path);
void SavePredictions(const PredictionSet &predictions, const std::string &path);

// Checks that `predictions` covers `corpus` token for token and that any
// gold labels it records match the corpus by name. Label order may differ.
void CheckAligned(const PredictionSet &predictions, const Corpus &corpus);

// Base tagger contract: one distribution over the tag inventory per token.
class BaseTagger {
 public:
  virtual ~BaseTagger() = default;
  virtual int num_labels() const = 0;
  virtual std::vector<Distribution> PredictDistribution(
      const Sentence &sentence) const = 0;
};

struct BaseTrainConfig {
  int embedding_dim = EmbeddingTable::kDefaultDim;
  int window = 3;
  std::vector<int> hidden;
  Activation activation = Activation::kTanh;
  int epochs = 20;
  OptimizerConfig optimizer{OptimizerKind::kAdam, 1e-2, 16};
  double embedding_learning_rate = 0.1;
  uint64_t seed = 1;

  void Validate() const;
};

// Classifier input for token i: the n-gram average of its window.
std::vector<double> TokenFeatures(std::span<const int> rows, int i, int window,
                                  const EmbeddingTable &embeddings);

// Softmax classifier over the n-gram averaged embedding of each token.
class WindowSoftmaxTagger : public BaseTagger {
 public:
  WindowSoftmaxTagger() = default;
  WindowSoftmaxTagger(EmbeddingTable embeddings, int window,
                      DenseNet classifier);

  bool trained() const { return !classifier_.empty(); }
  int num_labels() const override { return classifier_.output_size(); }
  int window() const { return window_; }
  const EmbeddingTable &embeddings() const { return embeddings_; }
  const DenseNet &classifier() const { return classifier_; }

  // Throws std::logic_error on an untrained tagger.
  std::vector<Distribution> PredictDistribution(
      const Sentence &sentence) const override;

  // Classifier logits for one token feature vector.
  std::vector<double> Logits(std::span<const double> features) const;

  std::vector<double> Features(std::span<const int> rows, int i) const;

 private:
  EmbeddingTable embeddings_;
  int window_ = 3;
  DenseNet classifier_;
};

struct BaseTrainResult {
  WindowSoftmaxTagger tagger;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double token_accuracy = 0.0;
  std::vector<double> epoch_loss;
};

// Trains embeddings and classifier jointly with mini-batch updates, then
// freezes the embedding table. Deterministic for a fixed seed.
BaseTrainResult TrainBase(const Corpus &corpus, const BaseTrainConfig &config);

// Runs `tagger` over every sentence; gold labels are copied from the
// corpus. Sentences are distributed over OpenMP threads.
PredictionSet PredictCorpus(const BaseTagger &tagger, const Corpus &corpus);

// Single-threaded reference for PredictCorpus.
PredictionSet PredictCorpusSerial(const BaseTagger &tagger,
                                  const Corpus &corpus);

struct TokenRef {
  int sentence = 0;
  int token = 0;

  auto operator<=>(const TokenRef &) const = default;
};

struct FilterResult {
  double threshold = 0.0;
  std::vector<TokenRef> confident;
  std::vector<TokenRef> filtered;

  int64_t total() const {
    return static_cast<int64_t>(confident.size() + filtered.size());
  }
  double filtered_fraction() const;
};

// Routes a token to `filtered` iff its maximum probability is below
// `threshold`. Threshold must lie in [0, 1].
FilterResult ConfidenceFilter(const PredictionSet &predictions,
                              double threshold);

}  // namespace augtag

#endif  // AUGTAG_BASE_TAGGER_H_
