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

#include "augtag/archive.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "augtag/errors.h"

namespace augtag {
namespace {

constexpr char kMagic[8] = {'A', 'U', 'G', 'T', 'A', 'G', 'M', 'A'};

class Writer {
 public:
  explicit Writer(std::ostream &out) : out_(out) {}

  void U8(uint8_t v) { out_.put(static_cast<char>(v)); }

  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<uint8_t>(v >> (8 * i)));
  }

  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<uint8_t>(v >> (8 * i)));
  }

  void I64(int64_t v) { U64(static_cast<uint64_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }

  void Str(const std::string &s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

  void Matrix(const std::vector<double> &values, size_t rows, size_t cols) {
    U32(static_cast<uint32_t>(rows));
    U32(static_cast<uint32_t>(cols));
    for (double v : values) F64(v);
  }

  void Net(const DenseNet &net) {
    U8(static_cast<uint8_t>(net.activation()));
    U32(static_cast<uint32_t>(net.layers().size()));
    for (const auto &layer : net.layers()) {
      Matrix(layer.weights, layer.out, layer.in);
      U32(static_cast<uint32_t>(layer.bias.size()));
      for (double b : layer.bias) F64(b);
    }
  }

 private:
  std::ostream &out_;
};

class Reader {
 public:
  explicit Reader(std::istream &in) : in_(in) {}

  uint8_t U8() {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) throw ParseError("archive is truncated", 0);
    return static_cast<uint8_t>(c);
  }

  uint32_t U32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(U8()) << (8 * i);
    return v;
  }

  uint64_t U64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(U8()) << (8 * i);
    return v;
  }

  int64_t I64() { return static_cast<int64_t>(U64()); }
  double F64() { return std::bit_cast<double>(U64()); }

  std::string Str() {
    const uint32_t n = U32();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (static_cast<uint32_t>(in_.gcount()) != n) {
      throw ParseError("archive is truncated", 0);
    }
    return s;
  }

  std::vector<double> Matrix(uint32_t *rows, uint32_t *cols) {
    *rows = U32();
    *cols = U32();
    std::vector<double> values(static_cast<size_t>(*rows) * *cols);
    for (double &v : values) v = F64();
    return values;
  }

  DenseNet Net() {
    const uint8_t activation = U8();
    if (activation > 1) throw ParseError("unknown activation in archive", 0);
    const uint32_t n = U32();
    std::vector<LayerParams> layers(n);
    for (auto &layer : layers) {
      uint32_t rows = 0;
      uint32_t cols = 0;
      layer.weights = Matrix(&rows, &cols);
      layer.out = static_cast<int>(rows);
      layer.in = static_cast<int>(cols);
      layer.bias.resize(U32());
      for (double &b : layer.bias) b = F64();
    }
    try {
      return DenseNet::FromLayers(std::move(layers),
                                  static_cast<Activation>(activation));
    } catch (const ValidationError &e) {
      throw ParseError(std::string("bad network in archive: ") + e.what(), 0);
    }
  }

  bool AtEnd() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream &in_;
};

}  // namespace

WindowSoftmaxTagger ModelArchive::BaseTagger() const {
  return WindowSoftmaxTagger(embeddings, base_window, base_classifier);
}

void WriteArchive(const ModelArchive &archive, std::ostream &out) {
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.U32(ModelArchive::kVersion);

  // Thread count is a runtime choice; leaving it out keeps archives
  // identical however many workers produced them.
  auto kv = archive.config.ToKeyValues();
  kv.erase("workers");
  w.U32(static_cast<uint32_t>(kv.size()));
  for (const auto &[key, value] : kv) {
    w.Str(key);
    w.Str(value);
  }

  w.F64(archive.inventory.minority_threshold());
  w.U32(static_cast<uint32_t>(archive.inventory.size()));
  for (LabelId id = 0; id < archive.inventory.size(); ++id) {
    w.Str(archive.inventory.Name(id));
    w.I64(archive.inventory.counts()[id]);
  }

  const auto &emb = archive.embeddings;
  w.U32(static_cast<uint32_t>(emb.vocab_size()));
  for (const auto &word : emb.words()) w.Str(word);
  w.Matrix(emb.data(), emb.vocab_size() + 1, emb.dim());

  w.U32(static_cast<uint32_t>(archive.base_window));
  w.Net(archive.base_classifier);

  w.U8(archive.dat ? 1 : 0);
  if (archive.dat) {
    w.F64(archive.dat->gamma);
    w.F64(archive.dat->reward_epsilon);
    w.U32(static_cast<uint32_t>(archive.dat->ngram));
    w.F64(archive.dat->threshold);
    w.Net(archive.dat->qnet);
  }
}

ModelArchive ReadArchive(std::istream &in) {
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not an augtag model archive", 0);
  }
  Reader r(in);
  const uint32_t version = r.U32();
  if (version != ModelArchive::kVersion) {
    throw ParseError("archive version " + std::to_string(version) +
                         " is not supported (expected " +
                         std::to_string(ModelArchive::kVersion) + ")",
                     0);
  }

  ModelArchive archive;
  std::map<std::string, std::string> kv;
  for (uint32_t n = r.U32(), i = 0; i < n; ++i) {
    std::string key = r.Str();
    kv[key] = r.Str();
  }
  archive.config = RunConfig::FromKeyValues(kv);

  const double minority_threshold = r.F64();
  std::vector<std::string> labels;
  std::vector<int64_t> counts;
  for (uint32_t n = r.U32(), i = 0; i < n; ++i) {
    labels.push_back(r.Str());
    counts.push_back(r.I64());
  }
  archive.inventory = TagInventory(std::move(labels), minority_threshold);
  for (LabelId id = 0; id < archive.inventory.size(); ++id) {
    archive.inventory.AddCount(id, counts[id]);
  }

  std::vector<std::string> words(r.U32());
  for (auto &word : words) word = r.Str();
  uint32_t rows = 0;
  uint32_t dim = 0;
  auto data = r.Matrix(&rows, &dim);
  if (rows != words.size() + 1) {
    throw ParseError("embedding matrix does not match vocabulary", 0);
  }
  archive.embeddings =
      EmbeddingTable::FromRows(std::move(words), static_cast<int>(dim), std::move(data));
  archive.embeddings.Freeze();

  archive.base_window = static_cast<int>(r.U32());
  archive.base_classifier = r.Net();

  if (r.U8() != 0) {
    DatModel dat;
    dat.gamma = r.F64();
    dat.reward_epsilon = r.F64();
    dat.ngram = static_cast<int>(r.U32());
    dat.threshold = r.F64();
    dat.qnet = r.Net();
    if (dat.qnet.output_size() != archive.inventory.size() ||
        dat.embedding_dim() != archive.embeddings.dim()) {
      throw ParseError("DAT network does not match the archive", 0);
    }
    archive.dat = std::move(dat);
  }
  if (!r.AtEnd()) throw ParseError("trailing bytes after archive", 0);
  if (archive.base_classifier.input_size() != archive.embeddings.dim() ||
      archive.base_classifier.output_size() != archive.inventory.size()) {
    throw ParseError("base classifier does not match the archive", 0);
  }
  return archive;
}

void SaveArchive(const ModelArchive &archive, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write archive '" + path + "'");
  WriteArchive(archive, out);
  if (!out) throw IoError("error writing archive '" + path + "'");
}

ModelArchive LoadArchive(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open archive '" + path + "'");
  try {
    return ReadArchive(in);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

}  // namespace augtag
