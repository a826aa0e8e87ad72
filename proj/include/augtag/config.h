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

#ifndef AUGTAG_CONFIG_H_
#define AUGTAG_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "augtag/base_tagger.h"
#include "augtag/corpus.h"
#include "augtag/dat.h"
#include "augtag/nncore.h"

namespace augtag {

// Every knob of a pipeline run. Defaults reproduce the reference operating
// point: trigram states, gamma 0.9, replay memory 5000, threshold 0.95,
// 128-dimensional embeddings, batch 16 for slot corpora and 10 for CoNLL.
struct RunConfig {
  CorpusFormat format = CorpusFormat::kConll;
  double minority_threshold = TagInventory::kDefaultMinorityThreshold;

  int embedding_dim = EmbeddingTable::kDefaultDim;
  int ngram = 3;
  // Unset means "by format": 16 for slots, 10 for conll.
  std::optional<int> batch_size;

  // Context window of the built-in base tagger; 1 makes it context-free.
  int base_window = 3;
  int base_epochs = 20;
  std::vector<int> base_hidden;
  OptimizerKind base_optimizer = OptimizerKind::kAdam;
  double base_learning_rate = 1e-2;
  double base_embedding_learning_rate = 0.1;

  double gamma = 0.9;
  double reward_epsilon = 1e-8;
  double threshold = 0.95;
  int64_t memory_size = 5000;
  // Episodes of DAT training; not a published value, tuned on the fixtures.
  int epochs = 4000;
  int max_steps = 0;
  double exploration = 0.0;
  std::vector<int> dat_hidden{100, 100};
  OptimizerKind dat_optimizer = OptimizerKind::kAdam;
  double dat_learning_rate = 1e-3;

  uint64_t data_seed = 1;
  uint64_t replay_seed = 2;
  int workers = 1;

  int EffectiveBatchSize() const;

  // Throws ValidationError naming the first out-of-range field.
  void Validate() const;

  BaseTrainConfig ToBaseConfig() const;
  DatConfig ToDatConfig() const;

  // Stable textual form, used in archives.
  std::map<std::string, std::string> ToKeyValues() const;
  static RunConfig FromKeyValues(const std::map<std::string, std::string> &kv);
};

std::string FormatSizes(const std::vector<int> &sizes);
std::vector<int> ParseSizes(const std::string &text);

}  // namespace augtag

#endif  // AUGTAG_CONFIG_H_
