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

#ifndef AUGTAG_ARCHIVE_H_
#define AUGTAG_ARCHIVE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "augtag/base_tagger.h"
#include "augtag/config.h"
#include "augtag/corpus.h"
#include "augtag/dat.h"
#include "augtag/features.h"
#include "augtag/nncore.h"

namespace augtag {

// Everything needed to rerun inference: the run configuration, the tag
// inventory with training counts, the shared embedding table, the base
// classifier and, once trained, the DAT Q-network.
//
// Binary layout, all integers and doubles little-endian:
//
//   "AUGTAGMA"  u32 version
//   config      u32 n, n x (str key, str value), keys sorted
//   inventory   f64 minority_threshold, u32 n, n x (str label, i64 count)
//   embeddings  u32 vocab, vocab x str word, matrix (vocab + 1) x dim
//   base        u32 window, net
//   dat         u8 present [f64 gamma, f64 epsilon, u32 ngram,
//                           f64 threshold, net]
//
//   str    = u32 length, bytes
//   matrix = u32 rows, u32 cols, rows * cols f64 row-major
//   net    = u8 activation, u32 layers, layers x (matrix out x in,
//            u32 out, out f64 bias)
struct ModelArchive {
  static constexpr uint32_t kVersion = 1;

  RunConfig config;
  TagInventory inventory;
  EmbeddingTable embeddings;
  int base_window = 3;
  DenseNet base_classifier;
  std::optional<DatModel> dat;

  WindowSoftmaxTagger BaseTagger() const;
};

void WriteArchive(const ModelArchive &archive, std::ostream &out);

// Throws ParseError on a bad magic, a version mismatch or truncation.
ModelArchive ReadArchive(std::istream &in);

void SaveArchive(const ModelArchive &archive, const std::string &path);
ModelArchive LoadArchive(const std::string &path);

}  // namespace augtag

#endif  // AUGTAG_ARCHIVE_H_
