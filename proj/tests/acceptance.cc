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


// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1
// when any criterion fails. Tolerances and budgets are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "augtag/base_tagger.h"
#include "augtag/cli.h"
#include "augtag/corpus.h"
#include "augtag/dat.h"
#include "augtag/evalreport.h"
#include "augtag/nncore.h"
#include "augtag/synthetic.h"
#include "oracles.h"
#include "test_support.h"

namespace augtag {
namespace {

constexpr double kRewardTolerance = 1e-9;
constexpr double kRewardLimitTolerance = 1e-6;
constexpr double kGradientTolerance = 1e-4;
constexpr double kRewardBudgetSeconds = 5.0;
constexpr double kGradientBudgetSeconds = 30.0;
constexpr double kToyBudgetSeconds = 120.0;
constexpr double kEndToEndBudgetSeconds = 300.0;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome Check(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

std::string Fmt(const char *format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> OneHotVector(int k, int w) {
  std::vector<double> v(w, 0.0);
  v[k] = 1.0;
  return v;
}

// ---------------------------------------------------------------------------

Outcome RewardOracle() {
  Stopwatch clock;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> width(2, 10);
  std::gamma_distribution<double> gamma(0.5, 1.0);
  std::bernoulli_distribution exact(0.05);
  double worst = 0.0;
  bool in_range = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = width(rng);
    std::uniform_int_distribution<int> label(0, w - 1);
    const int truth = label(rng);
    const int state = label(rng);
    std::vector<double> p(w);
    if (exact(rng)) {
      p = OneHotVector(label(rng), w);
    } else {
      double z = 0.0;
      for (double &x : p) z += (x = gamma(rng) + 1e-12);
      for (double &x : p) x /= z;
    }
    const double got = Reward(truth, state, p, 1e-8);
    const double want =
        oracle::Reward(OneHotVector(truth, w), OneHotVector(state, w), p, 1e-8);
    worst = std::max(worst, std::abs(got - want));
    in_range = in_range && got >= -1.0 && got <= 1.0;
  }
  const double t = clock.seconds();
  return Check(worst <= kRewardTolerance && in_range && t < kRewardBudgetSeconds,
               Fmt("1000 triples, max |diff| %.3g (tol 1e-9), all in [-1,1]: ", worst) +
                   (in_range ? "yes" : "no") + Fmt(", %.2fs (budget 5s)", t));
}

Outcome RewardLimits() {
  const double low = Reward(1, 1, OneHotVector(1, 4), 1e-8);
  const double high = Reward(1, 1, std::vector<double>{0.1, 0.6, 0.2, 0.1}, 1e-8);
  const bool ok = std::abs(low + 1.0) <= kRewardLimitTolerance &&
                  std::abs(high - 1.0) <= kRewardLimitTolerance;
  return Check(ok, Fmt("correct state + perfect prediction %.9f (want -1), "
                       "correct state + wrong prediction %.9f (want +1), tol 1e-6",
                       low, high));
}

Outcome GradientChecks() {
  Stopwatch clock;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int dim = 128, w = 9;

  DenseNet classifier({dim, w}, Activation::kTanh, 5);
  std::vector<double> x(dim);
  for (double &v : x) v = u(rng) / std::sqrt(dim);
  std::vector<double> grad(w);
  ForwardCache cache;
  SoftmaxCrossEntropy(classifier.Forward(x, &cache), 4, grad);
  const Gradients analytic = classifier.Backward(cache, grad);
  const double e1 = GradientCheck(
      classifier, [&] { return SoftmaxCrossEntropy(classifier.Forward(x), 4, grad); },
      analytic);

  DenseNet qnet({dim + w, 100, 100, w}, Activation::kTanh, 6);
  std::vector<double> s(dim + w, 0.0);
  for (int d = 0; d < dim; ++d) s[d] = u(rng) / std::sqrt(dim);
  s[dim + 2] = 1.0;
  const int action = 5;
  const double target = -0.4;
  ForwardCache qcache;
  auto q = qnet.Forward(s, &qcache);
  std::vector<double> qgrad(w, 0.0);
  qgrad[action] = 2.0 * (q[action] - target);
  const Gradients qanalytic = qnet.Backward(qcache, qgrad);
  const double e2 = GradientCheck(
      qnet,
      [&] {
        const double diff = qnet.Forward(s)[action] - target;
        return diff * diff;
      },
      qanalytic);
  const double t = clock.seconds();
  return Check(e1 < kGradientTolerance && e2 < kGradientTolerance &&
                   t < kGradientBudgetSeconds,
               Fmt("classifier 128->9 rel err %.2e, Q-net 137->100->100->9 rel err "
                   "%.2e (tol 1e-4), %.1fs (budget 30s)",
                   e1, e2, t));
}

Outcome ReplayFifo() {
  std::string detail;
  bool ok = true;
  for (size_t mu : {size_t{1}, size_t{2}, size_t{5000}}) {
    ReplayMemory memory(mu);
    const size_t pushes = 2 * mu + 3;
    for (size_t k = 0; k < pushes; ++k) {
      Experience e;
      e.state = MakeState(std::vector<double>{static_cast<double>(k)}, 0, 2);
      e.action = 1;
      e.next = Transition(e.state, 1);
      memory.Push(e);
      ok = ok && memory.size() <= mu;
    }
    bool order = memory.size() == mu;
    for (size_t i = 0; order && i < mu; ++i) {
      order = memory[i].state.ngram[0] == static_cast<double>(pushes - mu + i);
    }
    ok = ok && order;
    detail += (detail.empty() ? "" : ", ") + std::string("mu=") + std::to_string(mu) +
              " after " + std::to_string(pushes) + " pushes " +
              (order ? "holds the last mu in order" : "WRONG");
  }
  return Check(ok, detail);
}

Outcome ToyMdp() {
  Stopwatch clock;
  const std::vector<int> gold{2, 0, 1};
  const std::vector<std::vector<double>> probs{
      {0.2, 0.3, 0.5}, {0.7, 0.2, 0.1}, {0.1, 0.6, 0.3}};
  Corpus corpus;
  corpus.inventory = TagInventory({"A", "B", "C"});
  PredictionSet predictions;
  predictions.labels = corpus.inventory.labels();
  for (int k = 0; k < 3; ++k) {
    Sentence s;
    s.tokens.push_back({"t" + std::to_string(k), gold[k]});
    corpus.sentences.push_back(s);
    corpus.inventory.AddCount(gold[k]);
    predictions.sentences.push_back({{probs[k], gold[k]}});
  }
  const auto embeddings = EmbeddingTable::FromRows(
      {"t0", "t1", "t2"}, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0});

  std::vector<std::vector<double>> rewards(3, std::vector<double>(3));
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      rewards[k][l] = oracle::Reward(OneHotVector(gold[k], 3), OneHotVector(l, 3),
                                     probs[k], 1e-8);
    }
  }

  bool ok = true;
  std::string detail;
  for (double gamma : {0.5, 0.7, 0.9}) {
    DatConfig config;
    config.gamma = gamma;
    config.epochs = 1000;
    config.batch_size = 10;
    auto trained = TrainDat(config, corpus, predictions, embeddings).model;
    auto table = oracle::TabularQIteration(gold, rewards, gamma);
    int match = 0, states = 0, all_nine = 0;
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        const auto state = MakeState(corpus.sentences[k], 0, l, embeddings, 3, 3);
        const LabelId dqn = SelectAction(trained, state);
        if (l == gold[k]) {
          all_nine += dqn == gold[k];
          continue;
        }
        ++states;
        const int tab = oracle::GreedyLowest(table[k][l]);
        match += dqn == tab;
        all_nine += dqn == tab;
      }
    }
    ok = ok && match == states;
    detail += Fmt("gamma %.1f: %.0f/%.0f", gamma, match, states) +
              Fmt(" (9-state %.0f/9); ", all_nine);
  }
  const double t = clock.seconds();
  ok = ok && t < kToyBudgetSeconds;
  return Check(ok, detail + Fmt("%.1fs (budget 120s)", t));
}

Outcome Scorer() {
  std::mt19937_64 rng(99);
  static const char *kLabels[] = {"O", "B-A", "I-A", "B-B", "I-B", "B-C", "I-C"};
  std::uniform_int_distribution<int> len(1, 20), pick(0, 6);
  int agree = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = len(rng);
    std::vector<std::string> gold, pred;
    for (int i = 0; i < n; ++i) {
      gold.push_back(kLabels[pick(rng)]);
      pred.push_back(pick(rng) < 2 ? kLabels[pick(rng)] : gold.back());
    }
    auto r = ChunkF1(std::vector<std::vector<std::string>>{gold},
                     std::vector<std::vector<std::string>>{pred});
    auto o = oracle::BruteForceChunkCounts({gold}, {pred});
    agree += r.gold_chunks == o.gold && r.predicted_chunks == o.predicted &&
             r.correct_chunks == o.correct && r.f1 == o.F1();
  }
  Corpus fixture = LoadCorpus(testing::Fixture("two_chunks.conll"), CorpusFormat::kConll);
  PredictionSet missed = LoadPredictions(testing::Fixture("one_missed.pred"));
  std::vector<std::vector<std::string>> labels(1);
  for (const auto &t : missed.sentences[0]) labels[0].push_back(missed.labels[t.label]);
  const double f1 = ChunkF1(fixture.GoldLabelNames(), labels).f1;
  return Check(agree == 500 && std::abs(f1 - 2.0 / 3.0) < 1e-15,
               Fmt("%.0f/500 random pairs match the brute-force oracle exactly, "
                   "one-missed-chunk fixture F1 %.17g (want 2/3)",
                   agree, f1));
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome EndToEnd() {
  Stopwatch clock;
  std::vector<double> base_f1, combined_f1, gains;
  int64_t base_errors = 0, base_minority = 0, comb_errors = 0, comb_minority = 0;
  std::string per_seed;
  double minority_share_in_corpus = 0.0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec;
    spec.tokens = 5000;
    spec.seed = seed;
    Corpus corpus = GenerateSyntheticCorpus(spec);
    corpus.inventory.set_minority_threshold(0.02);
    CorpusSplit split = SplitCorpus(corpus, 0.8);
    int64_t minority_tokens = 0;
    for (LabelId id = 0; id < corpus.inventory.size(); ++id) {
      if (corpus.inventory.IsMinority(id)) minority_tokens += corpus.inventory.counts()[id];
    }
    minority_share_in_corpus +=
        static_cast<double>(minority_tokens) / static_cast<double>(corpus.num_tokens()) / 5.0;

    BaseTrainConfig base_config;
    base_config.embedding_dim = 16;
    base_config.window = 1;
    base_config.epochs = 20;
    base_config.seed = seed;
    auto base = TrainBase(split.train, base_config);

    DatConfig dat_config;
    dat_config.epochs = 3000;
    dat_config.batch_size = 10;
    dat_config.init_seed = seed;
    dat_config.replay_seed = seed + 100;
    auto dat = TrainDat(dat_config, split.train, PredictCorpus(base.tagger, split.train),
                        base.tagger.embeddings());

    auto test_pred = PredictCorpus(base.tagger, split.test);
    auto filter = ConfidenceFilter(test_pred, dat_config.threshold);
    auto relabeled = Relabel(dat.model, split.test, filter.filtered, test_pred,
                             base.tagger.embeddings(),
                             EpisodeBudget::ForLabels(split.test.inventory.size()));
    auto combined = CombineOutputs(test_pred, filter, relabeled);

    const auto gold = split.test.GoldLabels();
    auto rb = Evaluate(gold, test_pred.PredictedLabels(), split.test.inventory);
    auto rc = Evaluate(gold, combined.PredictedLabels(), split.test.inventory);
    base_f1.push_back(rb.f1);
    combined_f1.push_back(rc.f1);
    gains.push_back(rc.f1 - rb.f1);
    base_errors += rb.errors.total_errors;
    base_minority += rb.errors.minority_errors;
    comb_errors += rc.errors.total_errors;
    comb_minority += rc.errors.minority_errors;
    per_seed += Fmt("[seed %.0f F1 %.4f->%.4f, filtered %.1f%%] ", static_cast<double>(seed),
                    rb.f1, rc.f1, 100.0 * filter.filtered_fraction());
  }
  auto share = [](int64_t minority, int64_t total) {
    return total == 0 ? 0.0 : static_cast<double>(minority) / static_cast<double>(total);
  };
  const double base_share = share(base_minority, base_errors);
  const double comb_share = share(comb_minority, comb_errors);
  const double t = clock.seconds();
  const bool ok = Median(gains) >= 0.0 && Median(combined_f1) >= Median(base_f1) &&
                  comb_share <= base_share && t < kEndToEndBudgetSeconds;
  return Check(ok, Fmt("minority tokens %.1f%% of corpus; median F1 base %.4f, combined "
                       "%.4f, median paired gain %+.4f; ",
                       100.0 * minority_share_in_corpus, Median(base_f1),
                       Median(combined_f1), Median(gains)) +
                       Fmt("minority share of wrong tokens %.3f -> %.3f (pooled); ",
                           base_share, comb_share) +
                       per_seed + Fmt("%.0fs (budget 300s)", t));
}

std::string Env(const char *name, const std::string &fallback) {
  const char *v = std::getenv(name);
  return v != nullptr && *v != '\0' ? v : fallback;
}

std::map<std::string, std::string> StatsOf(const std::string &path,
                                           const std::string &format) {
  std::ostringstream out, err;
  std::map<std::string, std::string> kv;
  if (RunCli({"stats", "--corpus", path, "--format", format}, out, err) != 0) {
    kv["error"] = err.str();
    return kv;
  }
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

Outcome TagStatisticsReproduction() {
  const std::string data = AUGTAG_DATA_DIR;
  const std::string atis = Env("AUGTAG_ATIS_TRAIN", data + "/atis/atis.train");
  const std::string conll = Env("AUGTAG_CONLL_TRAIN", data + "/conll2003/eng.train");
  const bool have_atis = std::filesystem::exists(atis);
  const bool have_conll = std::filesystem::exists(conll);
  if (!have_atis && !have_conll) {
    return {Status::kSkip, "dataset files not found (looked for " + atis + " and " +
                               conll + "; set AUGTAG_ATIS_TRAIN / AUGTAG_CONLL_TRAIN)"};
  }
  bool ok = true;
  std::string detail;
  auto expect = [&](const std::string &name, const std::map<std::string, std::string> &kv,
                    const std::map<std::string, std::string> &want) {
    for (const auto &[k, v] : want) {
      auto it = kv.find(k);
      const std::string got = it == kv.end() ? "missing" : it->second;
      ok = ok && got == v;
      detail += name + " " + k + "=" + got + (got == v ? "" : " (want " + v + ")") + "; ";
    }
  };
  if (have_atis) {
    expect("ATIS", StatsOf(atis, "slots"),
           {{"minority_tag_types", "119"}, {"majority_tag_types", "8"},
            {"minority_tokens", "6323"}, {"majority_tokens", "38707"},
            {"total_tokens", "45030"}});
  } else {
    detail += "ATIS absent, skipped; ";
  }
  if (have_conll) {
    expect("CoNLL", StatsOf(conll, "conll"),
           {{"minority_tag_types", "2"}, {"majority_tag_types", "7"},
            {"minority_tokens", "2312"}, {"majority_tokens", "202255"}});
  } else {
    detail += "CoNLL-2003 absent, skipped; ";
  }
  return Check(ok, detail);
}

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Runs generate, train-base, train-dat, infer and eval; returns the output
// files by name.
std::map<std::string, std::string> PipelineOutputs(const testing::TempDir &dir,
                                                   const std::string &workers) {
  const std::string cfg = testing::Fixture("fixture.cfg");
  const std::vector<std::vector<std::string>> steps{
      {"generate", "--tokens", "1500", "--seed", "9", "--train-out", dir.File("train.conll"),
       "--test-out", dir.File("test.conll")},
      {"train-base", "--config", cfg, "--workers", workers, "--train",
       dir.File("train.conll"), "--out", dir.File("base.ama"), "--log",
       dir.File("base.jsonl")},
      {"train-dat", "--config", cfg, "--workers", workers, "--archive",
       dir.File("base.ama"), "--train", dir.File("train.conll"), "--out",
       dir.File("full.ama"), "--log", dir.File("dat.jsonl")},
      {"infer", "--workers", workers, "--archive", dir.File("full.ama"), "--test",
       dir.File("test.conll"), "--out", dir.File("pred.tsv"), "--stats",
       dir.File("stats.txt")},
      {"eval", "--workers", workers, "--test", dir.File("test.conll"), "--predictions",
       dir.File("pred.tsv"), "--archive", dir.File("full.ama"), "--report",
       dir.File("report.txt"), "--kv", dir.File("report.kv")},
  };
  std::map<std::string, std::string> files;
  for (const auto &args : steps) {
    std::ostringstream out, err;
    if (RunCli(args, out, err) != 0) {
      files["error"] = args[0] + ": " + err.str();
      return files;
    }
  }
  for (const char *name : {"base.ama", "full.ama", "base.jsonl", "dat.jsonl", "pred.tsv",
                           "stats.txt", "report.txt", "report.kv"}) {
    files[name] = Slurp(dir.File(name));
  }
  return files;
}

Outcome Determinism() {
  testing::TempDir a("det_a"), b("det_b"), c("det_c");
  auto first = PipelineOutputs(a, "1");
  auto second = PipelineOutputs(b, "1");
  auto threaded = PipelineOutputs(c, "4");
  if (first.count("error") || second.count("error") || threaded.count("error")) {
    return Check(false, "pipeline failed: " + first["error"] + second["error"] +
                            threaded["error"]);
  }
  int same = 0, same_threaded = 0;
  for (const auto &[name, bytes] : first) {
    same += second.at(name) == bytes;
    same_threaded += threaded.at(name) == bytes;
  }
  const int n = static_cast<int>(first.size());
  return Check(same == n && same_threaded == n,
               Fmt("%.0f/%.0f output files byte-identical across two runs, %.0f/%.0f "
                   "also identical with 4 worker threads",
                   same, n, same_threaded, n));
}

}  // namespace
}  // namespace augtag

int main() {
  using augtag::Outcome;
  using augtag::Status;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"reward matches independent oracle", augtag::RewardOracle},
      {"reward limit cases", augtag::RewardLimits},
      {"gradient checks", augtag::GradientChecks},
      {"replay memory FIFO", augtag::ReplayFifo},
      {"toy MDP policy equals tabular Q-iteration", augtag::ToyMdp},
      {"chunk scorer conformance", augtag::Scorer},
      {"end-to-end synthetic experiment", augtag::EndToEnd},
      {"tag statistics reproduction (ATIS, CoNLL-2003)", augtag::TagStatisticsReproduction},
      {"pipeline determinism", augtag::Determinism},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {Status::kFail, std::string("threw: ") + e.what()};
    }
    const char *tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    failures += o.status == Status::kFail;
    std::printf("%s [%zu] %s: %s\n", tag, i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
