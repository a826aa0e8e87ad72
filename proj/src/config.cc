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

#include "augtag/config.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <type_traits>

#include "augtag/errors.h"

namespace augtag {
namespace {

std::string Exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void Require(bool ok, const std::string &message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

std::string FormatSizes(const std::vector<int> &sizes) {
  std::string out;
  for (int s : sizes) {
    if (!out.empty()) out += ',';
    out += std::to_string(s);
  }
  return out;
}

std::vector<int> ParseSizes(const std::string &text) {
  std::vector<int> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::logic_error &) {
      used = 0;
    }
    if (used != item.size() || value <= 0) {
      throw ValidationError("bad layer size list '" + text + "'");
    }
    sizes.push_back(value);
  }
  return sizes;
}

int RunConfig::EffectiveBatchSize() const {
  if (batch_size) return *batch_size;
  return format == CorpusFormat::kSlots ? 16 : 10;
}

void RunConfig::Validate() const {
  Require(minority_threshold > 0.0 && minority_threshold <= 1.0,
          "minority-threshold must lie in (0, 1]");
  Require(embedding_dim > 0, "embedding-dim must be positive");
  Require(ngram > 0 && ngram % 2 == 1, "ngram must be odd and positive");
  Require(!batch_size || *batch_size > 0, "batch-size must be positive");
  Require(base_window > 0 && base_window % 2 == 1,
          "base-window must be odd and positive");
  Require(base_epochs >= 0, "base-epochs must be non-negative");
  Require(base_learning_rate > 0.0 && std::isfinite(base_learning_rate),
          "base-lr must be positive");
  Require(base_embedding_learning_rate >= 0.0 &&
              std::isfinite(base_embedding_learning_rate),
          "base-embedding-lr must be non-negative");
  Require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
  Require(reward_epsilon > 0.0, "reward-epsilon must be positive");
  Require(threshold >= 0.0 && threshold <= 1.0, "threshold must lie in [0, 1]");
  Require(memory_size > 0, "memory-size must be positive");
  Require(epochs >= 0, "epochs must be non-negative");
  Require(max_steps >= 0, "max-steps must be non-negative");
  Require(exploration >= 0.0 && exploration <= 1.0,
          "exploration must lie in [0, 1]");
  Require(dat_learning_rate > 0.0 && std::isfinite(dat_learning_rate),
          "dat-lr must be positive");
  Require(workers >= 1, "workers must be at least 1");
  for (int h : base_hidden) Require(h > 0, "base-hidden sizes must be positive");
  for (int h : dat_hidden) Require(h > 0, "dat-hidden sizes must be positive");
}

BaseTrainConfig RunConfig::ToBaseConfig() const {
  BaseTrainConfig config;
  config.embedding_dim = embedding_dim;
  config.window = base_window;
  config.hidden = base_hidden;
  config.epochs = base_epochs;
  config.optimizer = OptimizerConfig{base_optimizer, base_learning_rate,
                                     EffectiveBatchSize()};
  config.embedding_learning_rate = base_embedding_learning_rate;
  config.seed = data_seed;
  return config;
}

DatConfig RunConfig::ToDatConfig() const {
  DatConfig config;
  config.gamma = gamma;
  config.reward_epsilon = reward_epsilon;
  config.ngram = ngram;
  config.threshold = threshold;
  config.hidden = dat_hidden;
  config.memory_capacity = static_cast<size_t>(memory_size);
  config.batch_size = EffectiveBatchSize();
  config.epochs = epochs;
  config.max_steps = max_steps;
  config.exploration = exploration;
  config.optimizer =
      OptimizerConfig{dat_optimizer, dat_learning_rate, EffectiveBatchSize()};
  config.init_seed = data_seed;
  config.replay_seed = replay_seed;
  return config;
}

std::map<std::string, std::string> RunConfig::ToKeyValues() const {
  return {
      {"format", std::string(CorpusFormatName(format))},
      {"minority-threshold", Exact(minority_threshold)},
      {"embedding-dim", std::to_string(embedding_dim)},
      {"ngram", std::to_string(ngram)},
      {"batch-size", batch_size ? std::to_string(*batch_size) : "auto"},
      {"base-window", std::to_string(base_window)},
      {"base-epochs", std::to_string(base_epochs)},
      {"base-hidden", FormatSizes(base_hidden)},
      {"base-optimizer", std::string(OptimizerKindName(base_optimizer))},
      {"base-lr", Exact(base_learning_rate)},
      {"base-embedding-lr", Exact(base_embedding_learning_rate)},
      {"gamma", Exact(gamma)},
      {"reward-epsilon", Exact(reward_epsilon)},
      {"threshold", Exact(threshold)},
      {"memory-size", std::to_string(memory_size)},
      {"epochs", std::to_string(epochs)},
      {"max-steps", std::to_string(max_steps)},
      {"exploration", Exact(exploration)},
      {"dat-hidden", FormatSizes(dat_hidden)},
      {"dat-optimizer", std::string(OptimizerKindName(dat_optimizer))},
      {"dat-lr", Exact(dat_learning_rate)},
      {"data-seed", std::to_string(data_seed)},
      {"replay-seed", std::to_string(replay_seed)},
      {"workers", std::to_string(workers)},
  };
}

RunConfig RunConfig::FromKeyValues(
    const std::map<std::string, std::string> &kv) {
  RunConfig c;
  const auto known = c.ToKeyValues();
  for (const auto &[key, value] : kv) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  auto get = [&](const std::string &key) -> const std::string * {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string &key, auto &field) {
    const std::string *v = get(key);
    if (v == nullptr) return;
    try {
      using T = std::decay_t<decltype(field)>;
      if constexpr (std::is_floating_point_v<T>) {
        field = std::stod(*v);
      } else if constexpr (std::is_unsigned_v<T>) {
        field = static_cast<T>(std::stoull(*v));
      } else {
        field = static_cast<T>(std::stoll(*v));
      }
    } catch (const std::logic_error &) {
      throw ValidationError("bad value '" + *v + "' for " + key);
    }
  };
  if (const auto *v = get("format")) c.format = ParseCorpusFormat(*v);
  num("minority-threshold", c.minority_threshold);
  num("embedding-dim", c.embedding_dim);
  num("ngram", c.ngram);
  if (const auto *v = get("batch-size"); v != nullptr && *v != "auto") {
    int k = 0;
    num("batch-size", k);
    c.batch_size = k;
  }
  num("base-window", c.base_window);
  num("base-epochs", c.base_epochs);
  if (const auto *v = get("base-hidden")) c.base_hidden = ParseSizes(*v);
  if (const auto *v = get("base-optimizer")) c.base_optimizer = ParseOptimizerKind(*v);
  num("base-lr", c.base_learning_rate);
  num("base-embedding-lr", c.base_embedding_learning_rate);
  num("gamma", c.gamma);
  num("reward-epsilon", c.reward_epsilon);
  num("threshold", c.threshold);
  num("memory-size", c.memory_size);
  num("epochs", c.epochs);
  num("max-steps", c.max_steps);
  num("exploration", c.exploration);
  if (const auto *v = get("dat-hidden")) c.dat_hidden = ParseSizes(*v);
  if (const auto *v = get("dat-optimizer")) c.dat_optimizer = ParseOptimizerKind(*v);
  num("dat-lr", c.dat_learning_rate);
  num("data-seed", c.data_seed);
  num("replay-seed", c.replay_seed);
  num("workers", c.workers);
  return c;
}

}  // namespace augtag
