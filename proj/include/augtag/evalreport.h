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

#ifndef AUGTAG_EVALREPORT_H_
#define AUGTAG_EVALREPORT_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "augtag/corpus.h"

namespace augtag {

struct Chunk {
  std::string type;
  int start = 0;  // inclusive
  int end = 0;    // exclusive

  auto operator<=>(const Chunk &) const = default;
};

// Chunks of a BIO2 label sequence, conlleval style: B-X always opens a
// chunk; I-X continues a chunk of type X and otherwise opens one. Throws
// ValidationError for labels other than O, B-*, I-*.
std::vector<Chunk> ExtractChunks(std::span<const std::string> labels);

struct ErrorDistribution {
  int64_t total_errors = 0;
  int64_t minority_errors = 0;
  int64_t majority_errors = 0;
  // Fractions of total_errors; both 0 when there are no errors.
  double minority_share = 0.0;
  double majority_share = 0.0;
};

// Wrongly labeled tokens grouped by whether their gold label is a
// minority tag of `inventory` (which carries training-split counts).
ErrorDistribution ComputeErrorDistribution(
    std::span<const std::vector<LabelId>> gold,
    std::span<const std::vector<LabelId>> predicted,
    const TagInventory &inventory);

struct GroupAccuracy {
  int64_t tokens = 0;
  int64_t correct = 0;
  double accuracy() const {
    return tokens == 0 ? 0.0
                       : static_cast<double>(correct) / static_cast<double>(tokens);
  }
};

struct EvalReport {
  int64_t gold_chunks = 0;
  int64_t predicted_chunks = 0;
  int64_t correct_chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  int64_t tokens = 0;
  int64_t correct_tokens = 0;
  double token_accuracy = 0.0;

  GroupAccuracy minority;
  GroupAccuracy majority;
  ErrorDistribution errors;
};

// Chunk-level precision/recall/F1 over sentence-aligned label sequences;
// a chunk is correct when type and span both match. Throws
// ValidationError on any length mismatch.
EvalReport ChunkF1(std::span<const std::vector<std::string>> gold,
                   std::span<const std::vector<std::string>> predicted);

// ChunkF1 plus token accuracy, per-group accuracy and the error
// distribution. Label ids refer to `inventory`.
EvalReport Evaluate(std::span<const std::vector<LabelId>> gold,
                    std::span<const std::vector<LabelId>> predicted,
                    const TagInventory &inventory);

void WriteReportText(const EvalReport &report, std::ostream &out);
void WriteReportKeyValue(const EvalReport &report, std::ostream &out);

}  // namespace augtag

#endif  // AUGTAG_EVALREPORT_H_
