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

#ifndef AUGTAG_CORPUS_H_
#define AUGTAG_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace augtag {

using LabelId = int32_t;
inline constexpr LabelId kNoLabel = -1;

struct Token {
  std::string surface;
  LabelId gold_label = kNoLabel;
};

struct Sentence {
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
};

// Ordered label set with per-label training-token counts. Labels with
// count / total < minority_threshold form the minority group.
class TagInventory {
 public:
  static constexpr double kDefaultMinorityThreshold = 0.01;

  TagInventory() = default;
  explicit TagInventory(std::vector<std::string> labels,
                        double minority_threshold = kDefaultMinorityThreshold);

  // Returns the id of `label`, adding it with a zero count if new.
  LabelId Intern(std::string_view label);

  // Returns kNoLabel when absent.
  LabelId Find(std::string_view label) const;

  const std::string &Name(LabelId id) const;
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string> &labels() const { return labels_; }

  const std::vector<int64_t> &counts() const { return counts_; }
  int64_t total() const;
  void AddCount(LabelId id, int64_t n = 1);
  void ResetCounts();

  double minority_threshold() const { return minority_threshold_; }
  void set_minority_threshold(double threshold);

  bool IsMinority(LabelId id) const;

  bool operator==(const TagInventory &other) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LabelId> index_;
  std::vector<int64_t> counts_;
  double minority_threshold_ = kDefaultMinorityThreshold;
};

enum class Split { kTrain, kTest };

// Immutable after parsing.
struct Corpus {
  std::vector<Sentence> sentences;
  TagInventory inventory;
  Split split = Split::kTrain;

  int64_t num_tokens() const;
  std::vector<std::vector<LabelId>> GoldLabels() const;
  std::vector<std::vector<std::string>> GoldLabelNames() const;
};

enum class CorpusFormat { kConll, kSlots };

CorpusFormat ParseCorpusFormat(std::string_view name);
std::string_view CorpusFormatName(CorpusFormat format);

// Zero-based columns. label_col < 0 selects the last column of each line.
struct ColumnSpec {
  int token_col = 0;
  int label_col = -1;
};

struct ParseOptions {
  Split split = Split::kTrain;
  // When set, labels are resolved against this inventory (and its counts
  // kept); labels missing from it are rejected. Used for test splits.
  const TagInventory *reference = nullptr;
  double minority_threshold = TagInventory::kDefaultMinorityThreshold;
};

// CoNLL column text: one token per line, whitespace-delimited columns,
// blank lines between sentences. -DOCSTART- lines are skipped. Every token
// line must have the same column count as the first one.
Corpus ParseConll(std::istream &in, const ColumnSpec &columns = {},
                  const ParseOptions &options = {});

// Paired-sequence slot format: one utterance per line,
//   w_1 ... w_n <TAB> l_1 ... l_n
// When the words are wrapped in BOS ... EOS the first and last labels are
// dropped with them (the trailing one is the utterance intent in the
// common ATIS distribution). Blank and '#' lines are ignored.
Corpus ParseSlotCorpus(std::istream &in, const ParseOptions &options = {});

Corpus LoadCorpus(const std::string &path, CorpusFormat format,
                  const ParseOptions &options = {},
                  const ColumnSpec &columns = {});

// Two-column token/label output, re-parsable by ParseConll.
void WriteConll(const Corpus &corpus, std::ostream &out);
void WriteSlotCorpus(const Corpus &corpus, std::ostream &out);

// Lowercased form used for vocabulary lookups.
std::string NormalizeWord(std::string_view surface);

struct TagStatistics {
  std::vector<LabelId> minority;
  std::vector<LabelId> majority;
  int64_t minority_tokens = 0;
  int64_t majority_tokens = 0;
  int64_t total_tokens = 0;
  double minority_threshold = TagInventory::kDefaultMinorityThreshold;
};

// Minority/majority partition from the counts of `corpus` itself.
TagStatistics ComputeTagStatistics(const Corpus &corpus);

// Key-value report, one "key=value" per line.
void WriteStatisticsReport(const TagStatistics &stats,
                           const TagInventory &inventory, std::ostream &out);

}  // namespace augtag

#endif  // AUGTAG_CORPUS_H_
