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

#include "augtag/features.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "augtag/errors.h"

namespace augtag {

EmbeddingTable EmbeddingTable::Build(const Corpus &corpus, int dim,
                                     uint64_t seed) {
  if (dim <= 0) throw ValidationError("embedding dim must be positive");
  std::vector<std::string> words;
  std::unordered_map<std::string, int> seen;
  for (const auto &sentence : corpus.sentences) {
    for (const auto &token : sentence.tokens) {
      std::string word = NormalizeWord(token.surface);
      if (seen.emplace(word, static_cast<int>(words.size())).second) {
        words.push_back(std::move(word));
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(dim));
  std::vector<double> data((words.size() + 1) * static_cast<size_t>(dim));
  for (double &x : data) x = normal(rng);
  return FromRows(std::move(words), dim, std::move(data));
}

EmbeddingTable EmbeddingTable::FromRows(std::vector<std::string> words,
                                        int dim, std::vector<double> vectors) {
  if (dim <= 0) throw ValidationError("embedding dim must be positive");
  if (vectors.size() != (words.size() + 1) * static_cast<size_t>(dim)) {
    throw ValidationError("embedding data size does not match vocabulary");
  }
  EmbeddingTable table;
  table.dim_ = dim;
  table.words_ = std::move(words);
  table.data_ = std::move(vectors);
  for (size_t i = 0; i < table.words_.size(); ++i) {
    if (!table.index_.emplace(table.words_[i], static_cast<int>(i)).second) {
      throw ValidationError("duplicate vocabulary word '" + table.words_[i] +
                            "'");
    }
  }
  return table;
}

int EmbeddingTable::Lookup(std::string_view word) const {
  auto it = index_.find(NormalizeWord(word));
  return it == index_.end() ? unk_row() : it->second;
}

std::span<const double> EmbeddingTable::Row(int row) const {
  if (row < 0 || row > vocab_size()) {
    throw std::out_of_range("embedding row out of range");
  }
  return std::span<const double>(data_).subspan(
      static_cast<size_t>(row) * dim_, dim_);
}

std::span<double> EmbeddingTable::MutableRow(int row) {
  if (frozen_) throw std::logic_error("embedding table is frozen");
  if (row < 0 || row > vocab_size()) {
    throw std::out_of_range("embedding row out of range");
  }
  return std::span<double>(data_).subspan(static_cast<size_t>(row) * dim_,
                                          dim_);
}

void NGramConfig::Validate() const {
  if (n <= 0 || n % 2 == 0) {
    throw ValidationError("n-gram size must be odd and positive, got " +
                          std::to_string(n));
  }
}

std::vector<int> LookupRows(const Sentence &sentence,
                            const EmbeddingTable &table) {
  std::vector<int> rows;
  rows.reserve(sentence.tokens.size());
  for (const auto &token : sentence.tokens) {
    rows.push_back(table.Lookup(token.surface));
  }
  return rows;
}

std::vector<double> NGramAverage(std::span<const int> rows, int i, int n,
                                 const EmbeddingTable &table) {
  NGramConfig{n}.Validate();
  const int length = static_cast<int>(rows.size());
  if (i < 0 || i >= length) {
    throw std::out_of_range("token index " + std::to_string(i) +
                            " out of range for sentence of length " +
                            std::to_string(length));
  }
  const int half = (n - 1) / 2;
  const int lo = std::max(0, i - half);
  const int hi = std::min(length - 1, i + half);
  std::vector<double> mean(table.dim(), 0.0);
  for (int j = lo; j <= hi; ++j) {
    auto v = table.Row(rows[j]);
    for (int d = 0; d < table.dim(); ++d) mean[d] += v[d];
  }
  const double count = hi - lo + 1;
  for (double &x : mean) x /= count;
  return mean;
}

std::vector<double> NGramAverage(const Sentence &sentence, int i, int n,
                                 const EmbeddingTable &table) {
  auto rows = LookupRows(sentence, table);
  return NGramAverage(rows, i, n, table);
}

}  // namespace augtag
