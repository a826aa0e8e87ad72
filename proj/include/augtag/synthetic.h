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

#ifndef AUGTAG_SYNTHETIC_H_
#define AUGTAG_SYNTHETIC_H_

#include <cstdint>

#include "augtag/corpus.h"

namespace augtag {

// Generated BIO2 corpus for desk-scale experiments. Sentences mix filler
// words (O) with single-token locations (B-LOC), the two majority tags,
// and two-token person and organization mentions, the four minority
// tags. Some entity words are shared between types, so context decides.
struct SyntheticSpec {
  int64_t tokens = 5000;
  // Expected fraction of tokens carrying a minority tag.
  double minority_fraction = 0.05;
  // Fraction of locations whose word is also used for persons and
  // organizations.
  double ambiguity = 0.3;
  uint64_t seed = 1;
};

// Labels in a fixed order: O, B-LOC, B-PER, I-PER, B-ORG, I-ORG. Stops at
// the first sentence boundary at or after spec.tokens tokens.
Corpus GenerateSyntheticCorpus(const SyntheticSpec &spec,
                               Split split = Split::kTrain);

struct CorpusSplit {
  Corpus train;
  Corpus test;
};

// First `train_fraction` of the sentences for training, the rest for
// testing; the test inventory carries the training counts.
CorpusSplit SplitCorpus(const Corpus &corpus, double train_fraction);

}  // namespace augtag

#endif  // AUGTAG_SYNTHETIC_H_
