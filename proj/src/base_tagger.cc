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

#include "augtag/base_tagger.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "augtag/errors.h"

namespace augtag {
namespace {

constexpr char kPredictionsMagic[] = "# augtag predictions v1";

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) fields.push_back(field);
  return fields;
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Mean cross-entropy and token accuracy of `tagger` on `corpus`.
std::pair<double, double> Evaluate(const WindowSoftmaxTagger &tagger,
                                   const Corpus &corpus) {
  double loss = 0.0;
  int64_t correct = 0;
  int64_t total = 0;
  for (const auto &sentence : corpus.sentences) {
    auto dists = tagger.PredictDistribution(sentence);
    for (int i = 0; i < sentence.size(); ++i) {
      const LabelId gold = sentence.tokens[i].gold_label;
      loss -= std::log(std::max(dists[i][gold], 1e-300));
      correct += ArgMax(dists[i]) == gold ? 1 : 0;
      ++total;
    }
  }
  return {loss / static_cast<double>(total),
          static_cast<double>(correct) / static_cast<double>(total)};
}

}  // namespace

int64_t PredictionSet::num_tokens() const {
  int64_t n = 0;
  for (const auto &s : sentences) n += static_cast<int64_t>(s.size());
  return n;
}

const TokenPrediction &PredictionSet::at(int sentence, int token) const {
  if (sentence < 0 || sentence >= static_cast<int>(sentences.size()) ||
      token < 0 || token >= static_cast<int>(sentences[sentence].size())) {
    throw ValidationError("no prediction for sentence " +
                          std::to_string(sentence) + " token " +
                          std::to_string(token));
  }
  return sentences[sentence][token];
}

LabelId PredictionSet::PredictedLabel(int sentence, int token) const {
  const auto &p = at(sentence, token);
  return p.label != kNoLabel ? p.label : ArgMax(p.probs);
}

std::vector<std::vector<LabelId>> PredictionSet::PredictedLabels() const {
  std::vector<std::vector<LabelId>> out(sentences.size());
  for (size_t s = 0; s < sentences.size(); ++s) {
    for (size_t t = 0; t < sentences[s].size(); ++t) {
      out[s].push_back(
          PredictedLabel(static_cast<int>(s), static_cast<int>(t)));
    }
  }
  return out;
}

LabelId ArgMax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty vector");
  LabelId best = 0;
  for (size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = static_cast<LabelId>(k);
  }
  return best;
}

void CheckDistribution(std::span<const double> p, double tolerance) {
  if (p.empty()) throw ValidationError("empty probability distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ValidationError("probability " + FormatDouble(x) +
                            " is not a finite non-negative value");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw ValidationError("probabilities sum to " + FormatDouble(sum) +
                          ", not 1");
  }
}

void WritePredictions(const PredictionSet &predictions, std::ostream &out) {
  out << kPredictionsMagic << '\n' << "# labels";
  for (const auto &label : predictions.labels) out << '\t' << label;
  out << '\n';
  for (size_t s = 0; s < predictions.sentences.size(); ++s) {
    const auto &sentence = predictions.sentences[s];
    for (size_t t = 0; t < sentence.size(); ++t) {
      const auto &p = sentence[t];
      out << s << '\t' << t << '\t'
          << (p.gold == kNoLabel ? std::string("-") : predictions.labels.at(p.gold))
          << '\t'
          << (p.label == kNoLabel ? std::string("-")
                                  : predictions.labels.at(p.label))
          << '\t' << (p.source == LabelSource::kDat ? "dat" : "dnn");
      for (double x : p.probs) out << '\t' << FormatDouble(x);
      out << '\n';
    }
  }
}

PredictionSet ReadPredictions(std::istream &in) {
  PredictionSet predictions;
  std::string line;
  int64_t line_no = 0;
  if (!std::getline(in, line) || line != kPredictionsMagic) {
    throw ParseError("missing predictions header", 1);
  }
  ++line_no;
  if (!std::getline(in, line)) throw ParseError("missing label header", 2);
  ++line_no;
  auto header = SplitTabs(line);
  if (header.size() < 2 || header[0] != "# labels") {
    throw ParseError("malformed label header", line_no);
  }
  predictions.labels.assign(header.begin() + 1, header.end());
  std::map<std::string, LabelId> index;
  for (size_t k = 0; k < predictions.labels.size(); ++k) {
    if (!index.emplace(predictions.labels[k], static_cast<LabelId>(k)).second) {
      throw ParseError("duplicate label '" + predictions.labels[k] + "'",
                       line_no);
    }
  }
  auto resolve = [&](const std::string &name) -> LabelId {
    if (name == "-") return kNoLabel;
    auto it = index.find(name);
    if (it == index.end()) {
      throw ParseError("unknown label '" + name + "'", line_no);
    }
    return it->second;
  };
  const size_t w = predictions.labels.size();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 5 + w) {
      throw ParseError("expected " + std::to_string(5 + w) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    size_t s = 0;
    size_t t = 0;
    TokenPrediction p;
    try {
      s = std::stoul(fields[0]);
      t = std::stoul(fields[1]);
      for (size_t k = 0; k < w; ++k) p.probs.push_back(std::stod(fields[5 + k]));
    } catch (const std::logic_error &) {
      throw ParseError("malformed number", line_no);
    }
    p.gold = resolve(fields[2]);
    p.label = resolve(fields[3]);
    if (fields[4] == "dnn") {
      p.source = LabelSource::kBase;
    } else if (fields[4] == "dat") {
      p.source = LabelSource::kDat;
    } else {
      throw ParseError("unknown label source '" + fields[4] + "'", line_no);
    }
    try {
      CheckDistribution(p.probs);
    } catch (const ValidationError &e) {
      throw ParseError(e.what(), line_no);
    }
    if (s == predictions.sentences.size()) {
      predictions.sentences.emplace_back();
    } else if (s + 1 != predictions.sentences.size()) {
      throw ParseError("sentence index " + std::to_string(s) + " out of order",
                       line_no);
    }
    if (t != predictions.sentences.back().size()) {
      throw ParseError("token index " + std::to_string(t) + " out of order",
                       line_no);
    }
    predictions.sentences.back().push_back(std::move(p));
  }
  return predictions;
}

PredictionSet LoadPredictions(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions '" + path + "'");
  try {
    return ReadPredictions(in);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void SavePredictions(const PredictionSet &predictions,
                     const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write predictions '" + path + "'");
  WritePredictions(predictions, out);
  if (!out) throw IoError("error writing predictions '" + path + "'");
}

void CheckAligned(const PredictionSet &predictions, const Corpus &corpus) {
  const size_t n = std::min(predictions.sentences.size(), corpus.sentences.size());
  for (size_t s = 0; s < n; ++s) {
    if (predictions.sentences[s].size() != corpus.sentences[s].tokens.size()) {
      throw ValidationError(
          "sentence " + std::to_string(s) + " has " +
          std::to_string(corpus.sentences[s].tokens.size()) +
          " tokens in the corpus but " +
          std::to_string(predictions.sentences[s].size()) + " predictions");
    }
    for (size_t t = 0; t < predictions.sentences[s].size(); ++t) {
      const LabelId gold = predictions.sentences[s][t].gold;
      if (gold == kNoLabel) continue;
      const LabelId expected = corpus.sentences[s].tokens[t].gold_label;
      if (predictions.labels.at(gold) != corpus.inventory.Name(expected)) {
        throw ValidationError("sentence " + std::to_string(s) + ", token " +
                              std::to_string(t) + ": prediction file has gold '" +
                              predictions.labels.at(gold) + "' but the corpus has '" +
                              corpus.inventory.Name(expected) + "'");
      }
    }
  }
  if (predictions.sentences.size() != corpus.sentences.size()) {
    throw ValidationError("corpus has " +
                          std::to_string(corpus.sentences.size()) +
                          " sentences but predictions cover " +
                          std::to_string(predictions.sentences.size()) +
                          "; first divergence at sentence " +
                          std::to_string(n));
  }
}

void BaseTrainConfig::Validate() const {
  if (embedding_dim <= 0) throw ValidationError("embedding dim must be positive");
  NGramConfig{window}.Validate();
  for (int h : hidden) {
    if (h <= 0) throw ValidationError("hidden sizes must be positive");
  }
  if (epochs < 0) throw ValidationError("epochs must be non-negative");
  optimizer.Validate();
  if (!(embedding_learning_rate >= 0.0)) {
    throw ValidationError("embedding learning rate must be non-negative");
  }
}

WindowSoftmaxTagger::WindowSoftmaxTagger(EmbeddingTable embeddings, int window,
                                         DenseNet classifier)
    : embeddings_(std::move(embeddings)),
      window_(window),
      classifier_(std::move(classifier)) {
  NGramConfig{window_}.Validate();
  if (classifier_.input_size() != embeddings_.dim()) {
    throw ValidationError("classifier input does not match embedding dim");
  }
}

std::vector<double> WindowSoftmaxTagger::Features(std::span<const int> rows,
                                                  int i) const {
  return TokenFeatures(rows, i, window_, embeddings_);
}

std::vector<double> TokenFeatures(std::span<const int> rows, int i, int window,
                                  const EmbeddingTable &embeddings) {
  return NGramAverage(rows, i, window, embeddings);
}

std::vector<double> WindowSoftmaxTagger::Logits(
    std::span<const double> features) const {
  return classifier_.Forward(features);
}

std::vector<Distribution> WindowSoftmaxTagger::PredictDistribution(
    const Sentence &sentence) const {
  if (!trained()) throw std::logic_error("base tagger is not trained");
  auto rows = LookupRows(sentence, embeddings_);
  std::vector<Distribution> out;
  out.reserve(rows.size());
  for (int i = 0; i < sentence.size(); ++i) {
    out.push_back(Softmax(classifier_.Forward(Features(rows, i))));
  }
  return out;
}

BaseTrainResult TrainBase(const Corpus &corpus, const BaseTrainConfig &config) {
  config.Validate();
  if (corpus.sentences.empty() || corpus.num_tokens() == 0) {
    throw ValidationError("training corpus is empty");
  }
  const int w = corpus.inventory.size();
  std::mt19937_64 rng(config.seed);
  EmbeddingTable embeddings =
      EmbeddingTable::Build(corpus, config.embedding_dim, rng());
  std::vector<int> sizes{config.embedding_dim};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(w);
  DenseNet classifier(sizes, config.activation, rng());

  std::vector<std::vector<int>> rows;
  std::vector<TokenRef> order;
  for (int s = 0; s < static_cast<int>(corpus.sentences.size()); ++s) {
    rows.push_back(LookupRows(corpus.sentences[s], embeddings));
    for (int t = 0; t < corpus.sentences[s].size(); ++t) order.push_back({s, t});
  }

  BaseTrainResult result;
  result.initial_loss =
      Evaluate(WindowSoftmaxTagger(embeddings, config.window, classifier), corpus)
          .first;

  Optimizer optimizer(config.optimizer);
  const int half = (config.window - 1) / 2;
  const size_t batch = static_cast<size_t>(config.optimizer.batch_size);
  std::vector<double> logits_grad(w);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (size_t begin = 0; begin < order.size(); begin += batch) {
      const size_t end = std::min(order.size(), begin + batch);
      Gradients grads = classifier.ZeroGradients();
      std::map<int, std::vector<double>> row_grads;
      for (size_t k = begin; k < end; ++k) {
        const auto [s, t] = order[k];
        const auto &sentence_rows = rows[s];
        auto features = TokenFeatures(sentence_rows, t, config.window, embeddings);
        ForwardCache cache;
        auto logits = classifier.Forward(features, &cache);
        epoch_loss += SoftmaxCrossEntropy(
            logits, corpus.sentences[s].tokens[t].gold_label, logits_grad);
        grads.Add(classifier.Backward(cache, logits_grad));
        auto input_grad = classifier.InputGradient(cache, logits_grad);
        const int dim = config.embedding_dim;
        const int lo = std::max(0, t - half);
        const int hi = std::min(static_cast<int>(sentence_rows.size()) - 1, t + half);
        const double share = 1.0 / static_cast<double>(hi - lo + 1);
        for (int j = lo; j <= hi; ++j) {
          auto &g = row_grads[sentence_rows[j]];
          g.resize(dim, 0.0);
          for (int d = 0; d < dim; ++d) g[d] += share * input_grad[d];
        }
      }
      const double scale = 1.0 / static_cast<double>(end - begin);
      grads.Scale(scale);
      optimizer.Step(classifier, grads);
      for (const auto &[row, g] : row_grads) {
        auto vec = embeddings.MutableRow(row);
        for (int d = 0; d < config.embedding_dim; ++d) {
          vec[d] -= config.embedding_learning_rate * scale * g[d];
        }
      }
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(order.size()));
  }

  embeddings.Freeze();
  result.tagger =
      WindowSoftmaxTagger(std::move(embeddings), config.window, std::move(classifier));
  std::tie(result.final_loss, result.token_accuracy) =
      Evaluate(result.tagger, corpus);
  return result;
}

namespace {

void FillGold(const Corpus &corpus, PredictionSet &predictions) {
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    for (size_t t = 0; t < corpus.sentences[s].tokens.size(); ++t) {
      predictions.sentences[s][t].gold = corpus.sentences[s].tokens[t].gold_label;
    }
  }
}

std::vector<TokenPrediction> PredictSentence(const BaseTagger &tagger,
                                             const Sentence &sentence) {
  std::vector<TokenPrediction> out;
  for (auto &dist : tagger.PredictDistribution(sentence)) {
    TokenPrediction p;
    p.probs = std::move(dist);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

PredictionSet PredictCorpusSerial(const BaseTagger &tagger,
                                  const Corpus &corpus) {
  PredictionSet predictions;
  predictions.labels = corpus.inventory.labels();
  for (const auto &sentence : corpus.sentences) {
    predictions.sentences.push_back(PredictSentence(tagger, sentence));
  }
  FillGold(corpus, predictions);
  return predictions;
}

PredictionSet PredictCorpus(const BaseTagger &tagger, const Corpus &corpus) {
  PredictionSet predictions;
  predictions.labels = corpus.inventory.labels();
  const int n = static_cast<int>(corpus.sentences.size());
  predictions.sentences.resize(n);
  // Exceptions may not cross the parallel region boundary.
  std::string error;
#pragma omp parallel for schedule(dynamic, 8)
  for (int s = 0; s < n; ++s) {
    try {
      predictions.sentences[s] = PredictSentence(tagger, corpus.sentences[s]);
    } catch (const std::exception &e) {
#pragma omp critical(augtag_predict_error)
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw std::logic_error(error);
  FillGold(corpus, predictions);
  return predictions;
}

double FilterResult::filtered_fraction() const {
  return total() == 0 ? 0.0
                      : static_cast<double>(filtered.size()) /
                            static_cast<double>(total());
}

FilterResult ConfidenceFilter(const PredictionSet &predictions,
                              double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("confidence threshold must lie in [0, 1]");
  }
  FilterResult result;
  result.threshold = threshold;
  for (int s = 0; s < static_cast<int>(predictions.sentences.size()); ++s) {
    const auto &sentence = predictions.sentences[s];
    for (int t = 0; t < static_cast<int>(sentence.size()); ++t) {
      const auto &probs = sentence[t].probs;
      const double top = *std::max_element(probs.begin(), probs.end());
      (top < threshold ? result.filtered : result.confident).push_back({s, t});
    }
  }
  return result;
}

}  // namespace augtag
