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

#include "augtag/evalreport.h"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string_view>
#include <tuple>

#include "augtag/errors.h"

namespace augtag {
namespace {

struct Tag {
  char prefix;  // 'B', 'I' or 'O'
  std::string_view type;
};

Tag ParseTag(const std::string &label) {
  if (label == "O") return {'O', {}};
  if (label.size() > 2 && (label[0] == 'B' || label[0] == 'I') &&
      label[1] == '-') {
    return {label[0], std::string_view(label).substr(2)};
  }
  throw ValidationError("label '" + label + "' is not a BIO2 tag");
}

double Ratio(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string Fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

std::string Exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::vector<Chunk> ExtractChunks(std::span<const std::string> labels) {
  std::vector<Chunk> chunks;
  bool open = false;
  Chunk current;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    const Tag tag = ParseTag(labels[i]);
    const bool continues = open && tag.prefix == 'I' && tag.type == current.type;
    if (open && !continues) {
      current.end = i;
      chunks.push_back(current);
      open = false;
    }
    if (tag.prefix != 'O' && !continues) {
      current = Chunk{std::string(tag.type), i, i};
      open = true;
    }
  }
  if (open) {
    current.end = static_cast<int>(labels.size());
    chunks.push_back(current);
  }
  return chunks;
}

ErrorDistribution ComputeErrorDistribution(
    std::span<const std::vector<LabelId>> gold,
    std::span<const std::vector<LabelId>> predicted,
    const TagInventory &inventory) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("gold and predicted sentence counts differ");
  }
  ErrorDistribution dist;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw ValidationError("sentence " + std::to_string(s) +
                            " differs in length");
    }
    for (size_t t = 0; t < gold[s].size(); ++t) {
      if (gold[s][t] == predicted[s][t]) continue;
      ++dist.total_errors;
      if (inventory.IsMinority(gold[s][t])) {
        ++dist.minority_errors;
      } else {
        ++dist.majority_errors;
      }
    }
  }
  dist.minority_share = Ratio(dist.minority_errors, dist.total_errors);
  dist.majority_share = Ratio(dist.majority_errors, dist.total_errors);
  return dist;
}

EvalReport ChunkF1(std::span<const std::vector<std::string>> gold,
                   std::span<const std::vector<std::string>> predicted) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) +
                          " sentences, predictions have " +
                          std::to_string(predicted.size()));
  }
  EvalReport report;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw ValidationError("sentence " + std::to_string(s) + " has " +
                            std::to_string(gold[s].size()) +
                            " gold labels but " +
                            std::to_string(predicted[s].size()) +
                            " predicted labels");
    }
    auto g = ExtractChunks(gold[s]);
    auto p = ExtractChunks(predicted[s]);
    report.gold_chunks += static_cast<int64_t>(g.size());
    report.predicted_chunks += static_cast<int64_t>(p.size());
    // Both lists are sorted by start and non-overlapping.
    size_t i = 0;
    size_t j = 0;
    while (i < g.size() && j < p.size()) {
      if (g[i] == p[j]) {
        ++report.correct_chunks;
        ++i;
        ++j;
      } else if (std::tie(g[i].start, g[i].end) < std::tie(p[j].start, p[j].end)) {
        ++i;
      } else {
        ++j;
      }
    }
    for (size_t t = 0; t < gold[s].size(); ++t) {
      ++report.tokens;
      if (gold[s][t] == predicted[s][t]) ++report.correct_tokens;
    }
  }
  report.precision = Ratio(report.correct_chunks, report.predicted_chunks);
  report.recall = Ratio(report.correct_chunks, report.gold_chunks);
  report.f1 = report.precision + report.recall > 0.0
                  ? 2.0 * report.precision * report.recall /
                        (report.precision + report.recall)
                  : 0.0;
  report.token_accuracy = Ratio(report.correct_tokens, report.tokens);
  return report;
}

EvalReport Evaluate(std::span<const std::vector<LabelId>> gold,
                    std::span<const std::vector<LabelId>> predicted,
                    const TagInventory &inventory) {
  auto names = [&](std::span<const std::vector<LabelId>> ids) {
    std::vector<std::vector<std::string>> out;
    out.reserve(ids.size());
    for (const auto &sentence : ids) {
      auto &labels = out.emplace_back();
      for (LabelId id : sentence) labels.push_back(inventory.Name(id));
    }
    return out;
  };
  auto gold_names = names(gold);
  auto predicted_names = names(predicted);
  EvalReport report = ChunkF1(gold_names, predicted_names);
  for (size_t s = 0; s < gold.size(); ++s) {
    for (size_t t = 0; t < gold[s].size(); ++t) {
      GroupAccuracy &group =
          inventory.IsMinority(gold[s][t]) ? report.minority : report.majority;
      ++group.tokens;
      if (gold[s][t] == predicted[s][t]) ++group.correct;
    }
  }
  report.errors = ComputeErrorDistribution(gold, predicted, inventory);
  return report;
}

void WriteReportText(const EvalReport &report, std::ostream &out) {
  out << "Chunk-level evaluation (BIO2 chunks, exact type and span match)\n"
      << "  gold chunks:      " << report.gold_chunks << '\n'
      << "  predicted chunks: " << report.predicted_chunks << '\n'
      << "  correct chunks:   " << report.correct_chunks << '\n'
      << "  precision: " << Fixed(100.0 * report.precision, 2) << "%\n"
      << "  recall:    " << Fixed(100.0 * report.recall, 2) << "%\n"
      << "  F1:        " << Fixed(100.0 * report.f1, 2) << "%\n"
      << "Token accuracy: " << Fixed(100.0 * report.token_accuracy, 2) << "% ("
      << report.correct_tokens << '/' << report.tokens << ")\n"
      << "  minority tags: " << Fixed(100.0 * report.minority.accuracy(), 2)
      << "% (" << report.minority.correct << '/' << report.minority.tokens
      << ")\n"
      << "  majority tags: " << Fixed(100.0 * report.majority.accuracy(), 2)
      << "% (" << report.majority.correct << '/' << report.majority.tokens
      << ")\n"
      << "Wrongly labeled tokens: " << report.errors.total_errors << '\n'
      << "  minority tags: " << Fixed(100.0 * report.errors.minority_share, 2)
      << "% (" << report.errors.minority_errors << ")\n"
      << "  majority tags: " << Fixed(100.0 * report.errors.majority_share, 2)
      << "% (" << report.errors.majority_errors << ")\n";
}

void WriteReportKeyValue(const EvalReport &report, std::ostream &out) {
  out << "metric=chunk\n"
      << "gold_chunks=" << report.gold_chunks << '\n'
      << "predicted_chunks=" << report.predicted_chunks << '\n'
      << "correct_chunks=" << report.correct_chunks << '\n'
      << "precision=" << Exact(report.precision) << '\n'
      << "recall=" << Exact(report.recall) << '\n'
      << "f1=" << Exact(report.f1) << '\n'
      << "tokens=" << report.tokens << '\n'
      << "correct_tokens=" << report.correct_tokens << '\n'
      << "token_accuracy=" << Exact(report.token_accuracy) << '\n'
      << "minority_tokens=" << report.minority.tokens << '\n'
      << "minority_correct=" << report.minority.correct << '\n'
      << "majority_tokens=" << report.majority.tokens << '\n'
      << "majority_correct=" << report.majority.correct << '\n'
      << "total_errors=" << report.errors.total_errors << '\n'
      << "minority_errors=" << report.errors.minority_errors << '\n'
      << "majority_errors=" << report.errors.majority_errors << '\n'
      << "minority_error_share=" << Exact(report.errors.minority_share) << '\n'
      << "majority_error_share=" << Exact(report.errors.majority_share) << '\n';
}

}  // namespace augtag
