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


#include "augtag/cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "augtag/archive.h"
#include "augtag/base_tagger.h"
#include "augtag/corpus.h"
#include "augtag/dat.h"
#include "augtag/errors.h"
#include "augtag/evalreport.h"
#include "augtag/kernels.h"
#include "augtag/synthetic.h"

namespace augtag {
namespace {

using KeyValues = std::map<std::string, std::string>;

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void CloseOutput(std::ofstream &out, const std::string &path) {
  out.close();
  if (!out) throw IoError("error while writing " + path);
}

// Per-command state: the config layers plus the file paths.
struct Invocation {
  std::string config_path;
  KeyValues overrides;
  std::map<std::string, std::string> paths;

  RunConfig Resolve(const KeyValues &base) const {
    KeyValues merged = base;
    if (!config_path.empty()) {
      for (const auto &[k, v] : ReadConfigFile(config_path)) merged[k] = v;
    }
    for (const auto &[k, v] : overrides) merged[k] = v;
    RunConfig config = RunConfig::FromKeyValues(merged);
    config.Validate();
    kernels::SetThreads(config.workers);
    return config;
  }
  const std::string &path(const std::string &name) const {
    static const std::string kEmpty;
    auto it = paths.find(name);
    return it == paths.end() ? kEmpty : it->second;
  }
};

// Adds --config plus one flag per RunConfig key.
void AddConfigFlags(CLI::App *cmd, Invocation &inv) {
  cmd->add_option("--config", inv.config_path, "key = value config file");
  for (const auto &[key, value] : RunConfig{}.ToKeyValues()) {
    const std::string name = key;
    cmd->add_option_function<std::string>(
        "--" + name,
        [&inv, name](const std::string &v) { inv.overrides[name] = v; },
        "default " + value);
  }
}

CLI::Option *AddPath(CLI::App *cmd, Invocation &inv, const std::string &name,
                     const std::string &help, bool required) {
  auto *opt = cmd->add_option("--" + name, inv.paths[name], help);
  if (required) opt->required();
  return opt;
}

ParseOptions TrainOptions(const RunConfig &config) {
  ParseOptions options;
  options.split = Split::kTrain;
  options.minority_threshold = config.minority_threshold;
  return options;
}

ParseOptions TestOptions(const TagInventory &reference) {
  ParseOptions options;
  options.split = Split::kTest;
  options.reference = &reference;
  return options;
}

int TrainBaseCommand(const Invocation &inv, std::ostream &out) {
  const RunConfig config = inv.Resolve({});
  Corpus train =
      LoadCorpus(inv.path("train"), config.format, TrainOptions(config));
  BaseTrainResult result = TrainBase(train, config.ToBaseConfig());

  ModelArchive archive;
  archive.config = config;
  archive.inventory = train.inventory;
  archive.embeddings = result.tagger.embeddings();
  archive.base_window = result.tagger.window();
  archive.base_classifier = result.tagger.classifier();
  SaveArchive(archive, inv.path("out"));

  if (!inv.path("log").empty()) {
    auto log = OpenOutput(inv.path("log"));
    for (size_t e = 0; e < result.epoch_loss.size(); ++e) {
      nlohmann::json line = {{"type", "epoch"},
                             {"epoch", e + 1},
                             {"loss", result.epoch_loss[e]}};
      log << line.dump() << '\n';
    }
    CloseOutput(log, inv.path("log"));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "initial_loss=%.6f final_loss=%.6f token_accuracy=%.6f\n",
                result.initial_loss, result.final_loss, result.token_accuracy);
  out << "trained base tagger on " << train.num_tokens() << " tokens, "
      << train.inventory.size() << " labels\n"
      << buf;
  return kExitOk;
}

int TrainDatCommand(const Invocation &inv, std::ostream &out) {
  ModelArchive archive = LoadArchive(inv.path("archive"));
  const RunConfig config = inv.Resolve(archive.config.ToKeyValues());
  Corpus train = LoadCorpus(inv.path("train"), config.format,
                            TestOptions(archive.inventory));
  const WindowSoftmaxTagger base = archive.BaseTagger();

  PredictionSet predictions;
  if (!inv.path("predictions").empty()) {
    predictions = LoadPredictions(inv.path("predictions"));
    CheckAligned(predictions, train);
    if (predictions.labels != archive.inventory.labels()) {
      throw ValidationError("prediction labels differ from the archive inventory");
    }
  } else {
    predictions = PredictCorpus(base, train);
  }

  DatTrainResult result =
      TrainDat(config.ToDatConfig(), train, predictions, archive.embeddings);
  archive.config = config;
  archive.dat = result.model;
  SaveArchive(archive, inv.path("out"));

  if (!inv.path("log").empty()) {
    auto log = OpenOutput(inv.path("log"));
    WriteTrainingLog(result, log);
    CloseOutput(log, inv.path("log"));
  }
  int64_t steps = 0;
  int reached = 0;
  for (const auto &e : result.episodes) {
    steps += e.length;
    reached += e.reached_gold ? 1 : 0;
  }
  out << "trained DAT for " << result.episodes.size() << " episodes, "
      << steps << " steps, " << result.updates.size() << " updates, "
      << reached << " episodes reached the gold label\n";
  return kExitOk;
}

int InferCommand(const Invocation &inv, std::ostream &out, std::ostream &err) {
  ModelArchive archive = LoadArchive(inv.path("archive"));
  const RunConfig config = inv.Resolve(archive.config.ToKeyValues());
  Corpus test = LoadCorpus(inv.path("test"), config.format,
                           TestOptions(archive.inventory));
  const WindowSoftmaxTagger base = archive.BaseTagger();
  const PredictionSet predictions = PredictCorpus(base, test);
  const FilterResult filter = ConfidenceFilter(predictions, config.threshold);

  const bool base_only = !archive.dat.has_value();
  PredictionSet combined;
  if (base_only) {
    err << "warning: archive has no DAT model; writing base tagger output\n";
    FilterResult none;
    none.threshold = filter.threshold;
    none.confident = filter.confident;
    none.confident.insert(none.confident.end(), filter.filtered.begin(),
                          filter.filtered.end());
    std::sort(none.confident.begin(), none.confident.end());
    combined = CombineOutputs(predictions, none, {});
  } else {
    const int w = archive.inventory.size();
    const EpisodeBudget budget = config.max_steps > 0
                                     ? EpisodeBudget{config.max_steps}
                                     : EpisodeBudget::ForLabels(w);
    auto labels = Relabel(*archive.dat, test, filter.filtered, predictions,
                          archive.embeddings, budget);
    combined = CombineOutputs(predictions, filter, labels);
  }
  SavePredictions(combined, inv.path("out"));

  int64_t changed = 0;
  for (const auto &ref : filter.filtered) {
    if (combined.PredictedLabel(ref.sentence, ref.token) !=
        ArgMax(predictions.at(ref.sentence, ref.token).probs)) {
      ++changed;
    }
  }
  std::ostringstream stats;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", filter.threshold);
  stats << "threshold=" << buf << '\n'
        << "tokens=" << filter.total() << '\n'
        << "confident_tokens=" << filter.confident.size() << '\n'
        << "filtered_tokens=" << filter.filtered.size() << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", filter.filtered_fraction());
  stats << "filtered_fraction=" << buf << '\n'
        << "relabeled_tokens=" << changed << '\n'
        << "dat_applied=" << (base_only ? "false" : "true") << '\n'
        << "warning=" << (base_only ? "no_dat_model_base_only" : "none") << '\n';
  if (!inv.path("stats").empty()) {
    auto file = OpenOutput(inv.path("stats"));
    file << stats.str();
    CloseOutput(file, inv.path("stats"));
  }
  out << stats.str();
  return kExitOk;
}

// Maps prediction label names onto the inventory used for scoring.
std::vector<std::vector<LabelId>> PredictedIds(const PredictionSet &pred,
                                               const TagInventory &inventory) {
  std::vector<LabelId> remap(pred.labels.size());
  for (size_t k = 0; k < pred.labels.size(); ++k) {
    remap[k] = inventory.Find(pred.labels[k]);
  }
  std::vector<std::vector<LabelId>> ids(pred.sentences.size());
  for (size_t s = 0; s < pred.sentences.size(); ++s) {
    for (size_t t = 0; t < pred.sentences[s].size(); ++t) {
      const LabelId local = pred.PredictedLabel(static_cast<int>(s),
                                                static_cast<int>(t));
      if (remap[local] == kNoLabel) {
        throw ValidationError("predicted label '" + pred.labels[local] +
                              "' at sentence " + std::to_string(s) +
                              ", token " + std::to_string(t) +
                              " is not in the tag inventory");
      }
      ids[s].push_back(remap[local]);
    }
  }
  return ids;
}

int EvalCommand(const Invocation &inv, std::ostream &out, std::ostream &err) {
  const RunConfig config = inv.Resolve({});
  TagInventory reference;
  bool have_reference = true;
  if (!inv.path("archive").empty()) {
    reference = LoadArchive(inv.path("archive")).inventory;
  } else if (!inv.path("train").empty()) {
    reference =
        LoadCorpus(inv.path("train"), config.format, TrainOptions(config))
            .inventory;
  } else {
    have_reference = false;
  }
  reference.set_minority_threshold(config.minority_threshold);

  Corpus test;
  if (have_reference) {
    test = LoadCorpus(inv.path("test"), config.format, TestOptions(reference));
  } else {
    err << "notice: no --archive or --train given; minority tags are taken "
           "from the test corpus counts\n";
    ParseOptions options = TrainOptions(config);
    test = LoadCorpus(inv.path("test"), config.format, options);
  }
  const PredictionSet pred = LoadPredictions(inv.path("predictions"));
  CheckAligned(pred, test);
  const EvalReport report =
      Evaluate(test.GoldLabels(), PredictedIds(pred, test.inventory),
               test.inventory);

  WriteReportText(report, out);
  if (!inv.path("report").empty()) {
    auto file = OpenOutput(inv.path("report"));
    WriteReportText(report, file);
    CloseOutput(file, inv.path("report"));
  }
  if (!inv.path("kv").empty()) {
    auto file = OpenOutput(inv.path("kv"));
    WriteReportKeyValue(report, file);
    CloseOutput(file, inv.path("kv"));
  }
  return kExitOk;
}

int StatsCommand(const Invocation &inv, std::ostream &out) {
  const RunConfig config = inv.Resolve({});
  Corpus corpus =
      LoadCorpus(inv.path("corpus"), config.format, TrainOptions(config));
  const TagStatistics stats = ComputeTagStatistics(corpus);
  WriteStatisticsReport(stats, corpus.inventory, out);
  if (!inv.path("out").empty()) {
    auto file = OpenOutput(inv.path("out"));
    WriteStatisticsReport(stats, corpus.inventory, file);
    CloseOutput(file, inv.path("out"));
  }
  return kExitOk;
}

int GenerateCommand(const Invocation &inv, const SyntheticSpec &spec,
                    double train_fraction, std::ostream &out) {
  const RunConfig config = inv.Resolve({});
  Corpus corpus = GenerateSyntheticCorpus(spec);
  CorpusSplit split = SplitCorpus(corpus, train_fraction);
  auto write = [&](const Corpus &c, const std::string &path) {
    auto file = OpenOutput(path);
    if (config.format == CorpusFormat::kSlots) {
      WriteSlotCorpus(c, file);
    } else {
      WriteConll(c, file);
    }
    CloseOutput(file, path);
  };
  write(split.train, inv.path("train-out"));
  write(split.test, inv.path("test-out"));
  out << "wrote " << split.train.num_tokens() << " training and "
      << split.test.num_tokens() << " test tokens\n";
  return kExitOk;
}

}  // namespace

std::map<std::string, std::string> ReadConfigFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int64_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value in " + path, number);
    }
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key in " + path, number);
    kv[key] = Trim(line.substr(eq + 1));
  }
  if (in.bad()) throw IoError("error while reading " + path);
  return kv;
}

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"augtag: base tagger plus deep Q-learning relabeler"};
  app.require_subcommand(1);

  Invocation train_base, train_dat, infer, eval, stats, generate;

  auto *tb = app.add_subcommand("train-base", "train the base tagger");
  AddConfigFlags(tb, train_base);
  AddPath(tb, train_base, "train", "training corpus", true);
  AddPath(tb, train_base, "out", "archive to write", true);
  AddPath(tb, train_base, "log", "per-epoch loss log (JSON lines)", false);

  auto *td = app.add_subcommand("train-dat", "train the augmented tagger");
  AddConfigFlags(td, train_dat);
  AddPath(td, train_dat, "archive", "base archive", true);
  AddPath(td, train_dat, "train", "training corpus", true);
  AddPath(td, train_dat, "out", "archive to write", true);
  AddPath(td, train_dat, "predictions",
          "external base predictions for the training corpus", false);
  AddPath(td, train_dat, "log", "training log (JSON lines)", false);

  auto *in = app.add_subcommand("infer", "tag a corpus");
  AddConfigFlags(in, infer);
  AddPath(in, infer, "archive", "trained archive", true);
  AddPath(in, infer, "test", "corpus to tag", true);
  AddPath(in, infer, "out", "prediction file to write", true);
  AddPath(in, infer, "stats", "filter statistics file", false);

  auto *ev = app.add_subcommand("eval", "score predictions");
  AddConfigFlags(ev, eval);
  AddPath(ev, eval, "test", "gold corpus", true);
  AddPath(ev, eval, "predictions", "prediction file", true);
  AddPath(ev, eval, "archive", "archive whose inventory defines minority tags",
          false);
  AddPath(ev, eval, "train", "training corpus defining minority tags", false);
  AddPath(ev, eval, "report", "text report file", false);
  AddPath(ev, eval, "kv", "key=value report file", false);

  auto *st = app.add_subcommand("stats", "minority/majority tag statistics");
  AddConfigFlags(st, stats);
  AddPath(st, stats, "corpus", "training corpus", true);
  AddPath(st, stats, "out", "report file", false);

  SyntheticSpec spec;
  double train_fraction = 0.8;
  auto *gen = app.add_subcommand("generate", "write a synthetic corpus");
  AddConfigFlags(gen, generate);
  gen->add_option("--tokens", spec.tokens, "corpus size");
  gen->add_option("--minority-fraction", spec.minority_fraction);
  gen->add_option("--ambiguity", spec.ambiguity);
  gen->add_option("--seed", spec.seed);
  gen->add_option("--train-fraction", train_fraction);
  AddPath(gen, generate, "train-out", "training split", true);
  AddPath(gen, generate, "test-out", "test split", true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (tb->parsed()) return TrainBaseCommand(train_base, out);
    if (td->parsed()) return TrainDatCommand(train_dat, out);
    if (in->parsed()) return InferCommand(infer, out, err);
    if (ev->parsed()) return EvalCommand(eval, out, err);
    if (st->parsed()) return StatsCommand(stats, out);
    if (gen->parsed()) {
      return GenerateCommand(generate, spec, train_fraction, out);
    }
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NonFiniteError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace augtag
