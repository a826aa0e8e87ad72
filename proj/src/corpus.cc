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

#include "augtag/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "augtag/errors.h"

namespace augtag {
namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

// Resolves labels against a reference inventory or grows a fresh one, and
// keeps per-label counts of the tokens it has seen.
class LabelResolver {
 public:
  explicit LabelResolver(const ParseOptions &options) : options_(options) {
    if (options.reference != nullptr) {
      inventory_ = *options.reference;
    } else {
      inventory_.set_minority_threshold(options.minority_threshold);
    }
  }

  LabelId Resolve(std::string_view label, int64_t line) {
    if (options_.reference != nullptr) {
      LabelId id = inventory_.Find(label);
      if (id == kNoLabel) {
        throw ParseError("label '" + std::string(label) +
                             "' is not in the training inventory",
                         line);
      }
      return id;
    }
    LabelId id = inventory_.Intern(label);
    inventory_.AddCount(id);
    return id;
  }

  TagInventory Release() { return std::move(inventory_); }

 private:
  const ParseOptions &options_;
  TagInventory inventory_;
};

}  // namespace

TagInventory::TagInventory(std::vector<std::string> labels,
                           double minority_threshold) {
  set_minority_threshold(minority_threshold);
  for (const auto &label : labels) {
    if (index_.count(label) != 0) {
      throw ValidationError("duplicate label '" + label + "'");
    }
    Intern(label);
  }
}

LabelId TagInventory::Intern(std::string_view label) {
  std::string key(label);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  LabelId id = static_cast<LabelId>(labels_.size());
  labels_.push_back(key);
  counts_.push_back(0);
  index_.emplace(std::move(key), id);
  return id;
}

LabelId TagInventory::Find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  return it == index_.end() ? kNoLabel : it->second;
}

const std::string &TagInventory::Name(LabelId id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("label id " + std::to_string(id) +
                            " out of range");
  }
  return labels_[id];
}

int64_t TagInventory::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
}

void TagInventory::AddCount(LabelId id, int64_t n) {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("label id " + std::to_string(id) +
                            " out of range");
  }
  counts_[id] += n;
}

void TagInventory::ResetCounts() {
  std::fill(counts_.begin(), counts_.end(), 0);
}

void TagInventory::set_minority_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("minority threshold must be in (0, 1]");
  }
  minority_threshold_ = threshold;
}

bool TagInventory::IsMinority(LabelId id) const {
  int64_t all = total();
  if (all == 0) return false;
  return static_cast<double>(counts_.at(id)) / static_cast<double>(all) <
         minority_threshold_;
}

bool TagInventory::operator==(const TagInventory &other) const {
  return labels_ == other.labels_ && counts_ == other.counts_ &&
         minority_threshold_ == other.minority_threshold_;
}

int64_t Corpus::num_tokens() const {
  int64_t n = 0;
  for (const auto &s : sentences) n += s.size();
  return n;
}

std::vector<std::vector<LabelId>> Corpus::GoldLabels() const {
  std::vector<std::vector<LabelId>> out;
  out.reserve(sentences.size());
  for (const auto &s : sentences) {
    auto &labels = out.emplace_back();
    for (const auto &t : s.tokens) labels.push_back(t.gold_label);
  }
  return out;
}

std::vector<std::vector<std::string>> Corpus::GoldLabelNames() const {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (const auto &s : sentences) {
    auto &labels = out.emplace_back();
    for (const auto &t : s.tokens) labels.push_back(inventory.Name(t.gold_label));
  }
  return out;
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "conll") return CorpusFormat::kConll;
  if (name == "slots") return CorpusFormat::kSlots;
  throw ValidationError("unknown corpus format '" + std::string(name) +
                        "' (expected conll or slots)");
}

std::string_view CorpusFormatName(CorpusFormat format) {
  return format == CorpusFormat::kConll ? "conll" : "slots";
}

Corpus ParseConll(std::istream &in, const ColumnSpec &columns,
                  const ParseOptions &options) {
  Corpus corpus;
  corpus.split = options.split;
  LabelResolver resolver(options);
  Sentence current;
  size_t expected_columns = 0;
  int64_t line_no = 0;
  std::string line;

  auto flush = [&] {
    if (!current.tokens.empty()) {
      corpus.sentences.push_back(std::move(current));
      current = Sentence();
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) {
      flush();
      continue;
    }
    auto fields = SplitWhitespace(line);
    if (fields.front() == "-DOCSTART-") {
      flush();
      continue;
    }
    if (expected_columns == 0) {
      size_t needed = static_cast<size_t>(
          std::max(columns.token_col, columns.label_col) + 1);
      if (fields.size() < std::max<size_t>(needed, 2)) {
        throw ParseError("expected at least " +
                             std::to_string(std::max<size_t>(needed, 2)) +
                             " columns, found " +
                             std::to_string(fields.size()),
                         line_no);
      }
      expected_columns = fields.size();
    } else if (fields.size() != expected_columns) {
      throw ParseError("expected " + std::to_string(expected_columns) +
                           " columns, found " + std::to_string(fields.size()),
                       line_no);
    }
    size_t label_col = columns.label_col < 0
                           ? fields.size() - 1
                           : static_cast<size_t>(columns.label_col);
    Token token;
    token.surface = std::string(fields[columns.token_col]);
    token.gold_label = resolver.Resolve(fields[label_col], line_no);
    current.tokens.push_back(std::move(token));
  }
  flush();
  if (corpus.sentences.empty()) throw ParseError("corpus is empty", 0);
  corpus.inventory = resolver.Release();
  return corpus;
}

Corpus ParseSlotCorpus(std::istream &in, const ParseOptions &options) {
  Corpus corpus;
  corpus.split = options.split;
  LabelResolver resolver(options);
  int64_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line) || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("record " + std::to_string(corpus.sentences.size() + 1) +
                           " has no tab between words and labels",
                       line_no);
    }
    auto words = SplitWhitespace(std::string_view(line).substr(0, tab));
    auto labels = SplitWhitespace(std::string_view(line).substr(tab + 1));
    if (words.size() != labels.size()) {
      throw ParseError("record " + std::to_string(corpus.sentences.size() + 1) +
                           " has " + std::to_string(words.size()) +
                           " words but " + std::to_string(labels.size()) +
                           " labels",
                       line_no);
    }
    size_t begin = 0;
    size_t end = words.size();
    if (end >= 2 && words.front() == "BOS" && words.back() == "EOS") {
      ++begin;
      --end;
    }
    if (begin == end) {
      throw ParseError(
          "record " + std::to_string(corpus.sentences.size() + 1) + " is empty",
          line_no);
    }
    Sentence sentence;
    for (size_t i = begin; i < end; ++i) {
      sentence.tokens.push_back(
          Token{std::string(words[i]), resolver.Resolve(labels[i], line_no)});
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  if (corpus.sentences.empty()) throw ParseError("corpus is empty", 0);
  corpus.inventory = resolver.Release();
  return corpus;
}

Corpus LoadCorpus(const std::string &path, CorpusFormat format,
                  const ParseOptions &options, const ColumnSpec &columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path + "'");
  try {
    return format == CorpusFormat::kConll ? ParseConll(in, columns, options)
                                          : ParseSlotCorpus(in, options);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void WriteConll(const Corpus &corpus, std::ostream &out) {
  bool first = true;
  for (const auto &sentence : corpus.sentences) {
    if (!first) out << '\n';
    first = false;
    for (const auto &token : sentence.tokens) {
      out << token.surface << ' ' << corpus.inventory.Name(token.gold_label)
          << '\n';
    }
  }
}

void WriteSlotCorpus(const Corpus &corpus, std::ostream &out) {
  for (const auto &sentence : corpus.sentences) {
    for (int i = 0; i < sentence.size(); ++i) {
      if (i > 0) out << ' ';
      out << sentence.tokens[i].surface;
    }
    out << '\t';
    for (int i = 0; i < sentence.size(); ++i) {
      if (i > 0) out << ' ';
      out << corpus.inventory.Name(sentence.tokens[i].gold_label);
    }
    out << '\n';
  }
}

std::string NormalizeWord(std::string_view surface) {
  std::string word(surface);
  for (char &c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return word;
}

TagStatistics ComputeTagStatistics(const Corpus &corpus) {
  if (corpus.split != Split::kTrain) {
    throw ValidationError("tag statistics are defined on the training split");
  }
  std::vector<int64_t> counts(corpus.inventory.size(), 0);
  for (const auto &s : corpus.sentences) {
    for (const auto &t : s.tokens) ++counts.at(t.gold_label);
  }
  TagStatistics stats;
  stats.minority_threshold = corpus.inventory.minority_threshold();
  stats.total_tokens = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  if (stats.total_tokens == 0) throw ValidationError("corpus is empty");
  for (LabelId id = 0; id < corpus.inventory.size(); ++id) {
    double share =
        static_cast<double>(counts[id]) / static_cast<double>(stats.total_tokens);
    if (share < stats.minority_threshold) {
      stats.minority.push_back(id);
      stats.minority_tokens += counts[id];
    } else {
      stats.majority.push_back(id);
      stats.majority_tokens += counts[id];
    }
  }
  return stats;
}

void WriteStatisticsReport(const TagStatistics &stats,
                           const TagInventory &inventory, std::ostream &out) {
  auto join = [&](const std::vector<LabelId> &ids) {
    std::string s;
    for (LabelId id : ids) {
      if (!s.empty()) s += ',';
      s += inventory.Name(id);
    }
    return s;
  };
  std::ostringstream threshold;
  threshold << stats.minority_threshold;
  out << "minority_threshold=" << threshold.str() << '\n'
      << "minority_tag_types=" << stats.minority.size() << '\n'
      << "minority_tokens=" << stats.minority_tokens << '\n'
      << "majority_tag_types=" << stats.majority.size() << '\n'
      << "majority_tokens=" << stats.majority_tokens << '\n'
      << "total_tag_types=" << stats.minority.size() + stats.majority.size()
      << '\n'
      << "total_tokens=" << stats.total_tokens << '\n'
      << "minority_labels=" << join(stats.minority) << '\n'
      << "majority_labels=" << join(stats.majority) << '\n';
}

}  // namespace augtag
