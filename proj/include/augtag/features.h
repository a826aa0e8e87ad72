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

#ifndef AUGTAG_FEATURES_H_
#define AUGTAG_FEATURES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "augtag/corpus.h"

namespace augtag {

// Word-vector table shared by the base tagger and the augmented tagger.
// Rows 0..vocab_size-1 hold vocabulary words; the last row is the unknown
// word vector. Lookups use NormalizeWord().
class EmbeddingTable {
 public:
  static constexpr int kDefaultDim = 128;

  EmbeddingTable() = default;

  // Random-normal initialized table (stddev 1/sqrt(dim)) over the words
  // of `corpus` in first-occurrence order.
  static EmbeddingTable Build(const Corpus &corpus, int dim, uint64_t seed);

  // Table with explicit words and row-major vectors; `vectors` holds
  // (words.size() + 1) * dim values, the last row being the unknown vector.
  static EmbeddingTable FromRows(std::vector<std::string> words, int dim,
                                 std::vector<double> vectors);

  int dim() const { return dim_; }
  int vocab_size() const { return static_cast<int>(words_.size()); }
  int unk_row() const { return vocab_size(); }
  const std::vector<std::string> &words() const { return words_; }
  const std::vector<double> &data() const { return data_; }

  // Row for `word`, or unk_row() when out of vocabulary.
  int Lookup(std::string_view word) const;

  std::span<const double> Row(int row) const;
  std::span<const double> Embed(std::string_view word) const {
    return Row(Lookup(word));
  }
  std::span<const double> unk_vector() const { return Row(unk_row()); }

  // Throws std::logic_error once frozen.
  std::span<double> MutableRow(int row);
  void Freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  bool operator==(const EmbeddingTable &other) const {
    return dim_ == other.dim_ && words_ == other.words_ && data_ == other.data_;
  }

 private:
  int dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
  std::vector<double> data_;
  bool frozen_ = false;
};

struct NGramConfig {
  int n = 3;

  // Throws ValidationError unless n is odd and positive.
  void Validate() const;
};

// Mean of the vectors of tokens i-(n-1)/2 .. i+(n-1)/2 clipped to the
// sentence; the divisor is the number of in-bounds tokens.
std::vector<double> NGramAverage(const Sentence &sentence, int i, int n,
                                 const EmbeddingTable &table);

// Same, over precomputed table rows of a sentence.
std::vector<double> NGramAverage(std::span<const int> rows, int i, int n,
                                 const EmbeddingTable &table);

// Table rows of every token of `sentence`.
std::vector<int> LookupRows(const Sentence &sentence,
                            const EmbeddingTable &table);

}  // namespace augtag

#endif  // AUGTAG_FEATURES_H_
