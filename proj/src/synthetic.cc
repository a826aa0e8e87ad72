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

#include "augtag/synthetic.h"

#include <array>
#include <random>
#include <string>
#include <vector>

#include "augtag/errors.h"

namespace augtag {
namespace {

const std::vector<std::string> kFiller = {
    "the",    "a",      "of",     "and",   "said",   "on",     "for",
    "with",   "was",    "is",     "that",  "by",     "it",     "at",
    "as",     "will",   "has",    "his",   "after",  "new",    "year",
    "week",   "two",    "last",   "first", "their",  "been",   "were",
    "market", "talks",  "game",   "team",  "report", "percent", "told",
    "state",  "police", "people", "city",  "win",    "match",  "shares",
    "price",  "rose",   "fell",   "won",   "lost",   "plan",   "deal",
    "season"};

const std::vector<std::string> kLocationCues = {"in", "to", "from", "near"};
const std::vector<std::string> kPersonCues = {"mr", "minister", "coach"};
const std::vector<std::string> kOrgCues = {"shares", "analysts", "bought"};

const std::vector<std::string> kLocations = {
    "london", "berlin", "tokyo",  "madrid",  "moscow", "sydney",
    "cairo",  "lima",   "oslo",   "dublin",  "rome",   "seoul",
    "vienna", "quito",  "athens", "nairobi"};

// Words that name locations and also start person or organization
// mentions.
const std::vector<std::string> kShared = {"jordan", "paris", "georgia",
                                          "victoria", "chelsea", "phoenix"};

const std::vector<std::string> kFirstNames = {"john", "maria", "ahmed",
                                              "li",   "ana",   "peter"};
const std::vector<std::string> kLastNames = {"smith", "garcia", "chen",
                                             "khan",  "novak",  "okafor"};
const std::vector<std::string> kOrgHeads = {"acme", "globex", "initech",
                                            "umbrella", "stark"};
const std::vector<std::string> kOrgTails = {"corp", "inc", "group", "bank"};

enum Label : LabelId { kO, kBLoc, kBPer, kIPer, kBOrg, kIOrg };

}  // namespace

Corpus GenerateSyntheticCorpus(const SyntheticSpec &spec, Split split) {
  if (spec.tokens <= 0) throw ValidationError("token count must be positive");
  if (!(spec.minority_fraction >= 0.0 && spec.minority_fraction < 0.5)) {
    throw ValidationError("minority fraction must lie in [0, 0.5)");
  }
  if (!(spec.ambiguity >= 0.0 && spec.ambiguity <= 1.0)) {
    throw ValidationError("ambiguity must lie in [0, 1]");
  }
  Corpus corpus;
  corpus.split = split;
  corpus.inventory =
      TagInventory({"O", "B-LOC", "B-PER", "I-PER", "B-ORG", "I-ORG"});

  std::mt19937_64 rng(spec.seed);
  auto pick = [&](const std::vector<std::string> &words) -> const std::string & {
    std::uniform_int_distribution<size_t> d(0, words.size() - 1);
    return words[d(rng)];
  };
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> length(6, 12);

  // Each minority mention contributes two tokens plus one cue word.
  const double mention_rate = spec.minority_fraction / 2.0;
  const double location_rate = 0.16;

  int64_t produced = 0;
  while (produced < spec.tokens) {
    Sentence sentence;
    auto add = [&](const std::string &word, Label label) {
      sentence.tokens.push_back(Token{word, label});
    };
    const int target = length(rng);
    while (sentence.size() < target) {
      const double u = coin(rng);
      if (u < mention_rate) {
        const bool person = coin(rng) < 0.5;
        const bool shared = coin(rng) < spec.ambiguity;
        if (person) {
          add(pick(kPersonCues), kO);
          add(shared ? pick(kShared) : pick(kFirstNames), kBPer);
          add(pick(kLastNames), kIPer);
        } else {
          add(pick(kOrgCues), kO);
          add(shared ? pick(kShared) : pick(kOrgHeads), kBOrg);
          add(pick(kOrgTails), kIOrg);
        }
      } else if (u < mention_rate + location_rate) {
        add(pick(kLocationCues), kO);
        add(coin(rng) < spec.ambiguity ? pick(kShared) : pick(kLocations),
            kBLoc);
      } else {
        add(pick(kFiller), kO);
      }
    }
    for (const auto &token : sentence.tokens) {
      corpus.inventory.AddCount(token.gold_label);
    }
    produced += sentence.size();
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

CorpusSplit SplitCorpus(const Corpus &corpus, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  const size_t n_train = static_cast<size_t>(
      train_fraction * static_cast<double>(corpus.sentences.size()));
  if (n_train == 0 || n_train >= corpus.sentences.size()) {
    throw ValidationError("corpus too small to split");
  }
  CorpusSplit split;
  split.train.split = Split::kTrain;
  split.test.split = Split::kTest;
  split.train.inventory = corpus.inventory;
  split.train.inventory.ResetCounts();
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    if (s < n_train) {
      for (const auto &t : corpus.sentences[s].tokens) {
        split.train.inventory.AddCount(t.gold_label);
      }
      split.train.sentences.push_back(corpus.sentences[s]);
    } else {
      split.test.sentences.push_back(corpus.sentences[s]);
    }
  }
  split.test.inventory = split.train.inventory;
  return split;
}

}  // namespace augtag
