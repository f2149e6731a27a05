// Copyright 2026 The lide Authors
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

#include "cli.h"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lide/corpus.h"
#include "lide/ensemble.h"
#include "lide/error.h"
#include "lide/eval.h"
#include "lide/extbench.h"
#include "lide/features.h"
#include "lide/linear.h"
#include "lide/model_io.h"
#include "lide/rnn.h"
#include "lide/utf8.h"

namespace lide::cli {
namespace {

// Corpus-reading flags shared by every subcommand that ingests DSL files.
struct CorpusFlags {
  bool label_first = false;
  bool include_other = false;
  std::string registry_path;

  void Attach(CLI::App* app) {
    app->add_flag("--label-first", label_first,
                  "Input columns are label<TAB>sentence");
    app->add_flag("--include-other", include_other,
                  "Keep labels unknown to the registry as extra classes");
    app->add_option("--registry", registry_path,
                    "Registry JSON (defaults to the 13 DSL languages)");
  }

  std::shared_ptr<const Registry> registry() const {
    return registry_path.empty() ? Registry::DslDefault()
                                 : LoadRegistryFile(registry_path);
  }

  Corpus Read(const std::string& path, std::ostream& err) const {
    return Read(path, registry(), err);
  }

  Corpus Read(const std::string& path,
              std::shared_ptr<const Registry> reg, std::ostream& err) const {
    ParseReport report;
    Corpus c = ParseDslFile(path, std::move(reg), {label_first}, &report);
    if (report.blank_lines > 0) {
      err << "lide: " << path << ": skipped " << report.blank_lines
          << " blank line(s)\n";
    }
    for (const auto& r : report.rejected) {
      err << "lide: " << path << ":" << r.line << ": rejected (" << r.reason
          << ")\n";
    }
    return include_other ? c : KnownOnly(c);
  }
};

// GRU hyper-parameters shared by train/grid-search/stack.
struct GruFlags {
  std::optional<int> epochs;
  int hidden = 64;
  double dropout = 0.2;
  int embed_dim = 32;
  std::optional<double> lr;
  std::size_t batch = 16;
  std::size_t max_len = kDefaultMaxSequenceLength;
  std::string pooling = "mean";
  double clip_norm = 0.0;
  int min_count = 1;
  std::optional<std::size_t> max_vocab;

  void Attach(CLI::App* app) {
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--hidden", hidden, "GRU hidden units");
    app->add_option("--dropout", dropout, "Dropout on the pooled state");
    app->add_option("--embed-dim", embed_dim, "Embedding dimension");
    app->add_option("--lr", lr, "Learning rate");
    app->add_option("--batch", batch, "Mini-batch size");
    app->add_option("--max-len", max_len, "Maximum tokens per sentence");
    app->add_option("--pooling", pooling, "mean or last")
        ->check(CLI::IsMember({"mean", "last"}));
    app->add_option("--clip-norm", clip_norm, "Global gradient-norm cap");
    app->add_option("--min-count", min_count, "Vocabulary frequency floor");
    app->add_option("--max-vocab", max_vocab, "Vocabulary size cap");
  }

  TrainConfig Config(std::uint64_t seed) const {
    TrainConfig c;
    c.epochs = epochs.value_or(c.epochs);
    c.hidden = hidden;
    c.dropout = dropout;
    c.embed_dim = embed_dim;
    c.learning_rate = lr.value_or(c.learning_rate);
    c.batch_size = batch;
    c.max_len = max_len;
    c.pooling = pooling == "last" ? Pooling::kLast : Pooling::kMean;
    c.clip_norm = clip_norm;
    c.min_count = min_count;
    c.max_vocab = max_vocab;
    c.seed = seed;
    return c;
  }
};

struct LinearFlags {
  double alpha = 1.0;
  double lambda = LogRegConfig{}.lambda;
  std::size_t lr_batch = 64;

  void Attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "Naive Bayes smoothing");
    app->add_option("--lambda", lambda, "L2 strength for logreg");
    app->add_option("--lr-batch", lr_batch, "Mini-batch size for logreg");
  }
};

// Opens `path` for writing, or returns `fallback` for "" / "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::vector<T> ParseList(const std::string& s, const char* what) {
  std::vector<T> out;
  for (const auto& item : SplitList(s)) {
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !is.eof()) {
      throw Error(std::string("bad ") + what + " value '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::pair<int, int> ParseRange(const std::string& s) {
  const auto dash = s.find('-');
  try {
    if (dash == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
  } catch (const std::exception&) {
    throw Error("bad n range '" + s + "' (expected N or A-B)");
  }
}

double CorpusAccuracy(const Classifier& model, const Corpus& corpus) {
  return Accuracy(PredictAll(model, corpus), Golds(corpus));
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

int Run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"lide: language identification toolkit", "lide"};
  app.require_subcommand(1);
  app.fallthrough(false);
  std::uint64_t seed = 0;

  // train
  auto* train = app.add_subcommand("train", "Train an mnb, logreg or gru model");
  std::string train_kind, train_spec, train_path, valid_path, train_out,
      history_path;
  double split_fraction = 0.9;
  CorpusFlags train_corpus;
  GruFlags train_gru;
  LinearFlags train_linear;
  train->add_option("--model", train_kind, "mnb | logreg | gru")
      ->required()
      ->check(CLI::IsMember({"mnb", "logreg", "gru"}));
  train->add_option("--ngram", train_spec, "Feature spec unit:min-max[:mode]");
  train->add_option("--train", train_path, "Training corpus")->required();
  train->add_option("--valid", valid_path, "Validation corpus");
  train->add_option("--split", split_fraction,
                    "GRU: train fraction when --valid is absent");
  train->add_option("--out", train_out, "Model file to write")->required();
  train->add_option("--history", history_path,
                    "Per-epoch CSV epoch,train_acc,valid_acc (valid_acc is 0 "
                    "without --valid for logreg)");
  train->add_option("--seed", seed, "Seed for all randomness");
  train_corpus.Attach(train);
  train_gru.Attach(train);
  train_linear.Attach(train);

  // predict
  auto* predict = app.add_subcommand("predict", "Label stdin lines");
  std::string model_path;
  predict->add_option("--model", model_path, "Model file")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy on a labeled file");
  std::string test_path, confusion_path, predictions_path;
  bool collapse = false;
  CorpusFlags eval_corpus;
  evaluate->add_option("--model", model_path, "Model file")->required();
  evaluate->add_option("--test", test_path, "Labeled corpus")->required();
  evaluate->add_option("--confusion", confusion_path, "Confusion matrix CSV");
  evaluate->add_flag("--groups", collapse, "Collapse the matrix to groups");
  evaluate->add_option("--predictions", predictions_path,
                       "Write one predicted label per line");
  evaluate->add_flag("--label-first", eval_corpus.label_first,
                     "Input columns are label<TAB>sentence");

  // sweep-ngrams
  auto* sweep = app.add_subcommand("sweep-ngrams",
                                   "Accuracy as a function of n-gram order");
  std::string sweep_kind = "mnb", sweep_unit = "char", sweep_range = "1-9",
              sweep_mode = "restricted", sweep_out;
  CorpusFlags sweep_corpus;
  LinearFlags sweep_linear;
  int sweep_epochs = LogRegConfig{}.epochs;
  sweep->add_option("--model", sweep_kind, "mnb | logreg")
      ->check(CLI::IsMember({"mnb", "logreg"}));
  sweep->add_option("--unit", sweep_unit, "char | word")
      ->check(CLI::IsMember({"char", "word"}));
  sweep->add_option("--n", sweep_range, "Order range, e.g. 1-9");
  sweep->add_option("--mode", sweep_mode, "restricted | spanning")
      ->check(CLI::IsMember({"restricted", "spanning"}));
  sweep->add_option("--train", train_path, "Training corpus")->required();
  sweep->add_option("--valid", valid_path, "Validation corpus");
  sweep->add_option("--split", split_fraction,
                    "Train fraction when --valid is absent");
  sweep->add_option("--out", sweep_out, "CSV output (default stdout)");
  sweep->add_option("--epochs", sweep_epochs, "logreg epochs");
  sweep->add_option("--seed", seed, "Seed for all randomness");
  sweep_corpus.Attach(sweep);
  sweep_linear.Attach(sweep);

  // grid-search
  auto* grid = app.add_subcommand("grid-search",
                                  "Two-stage GRU hyper-parameter search");
  std::string devel_path, grid_spec = "char:3-3", grid_epochs = "5,10,20",
              grid_hidden = "32,64,128", grid_dropout = "0.2,0.45",
              grid_out;
  std::size_t top_k = 2;
  CorpusFlags grid_corpus;
  GruFlags grid_gru;
  grid->add_option("--devel", devel_path, "Development corpus")->required();
  grid->add_option("--ngram", grid_spec, "Single-order feature spec");
  grid->add_option("--epochs-grid", grid_epochs, "Comma-separated epochs");
  grid->add_option("--hidden-grid", grid_hidden, "Comma-separated sizes");
  grid->add_option("--dropout-grid", grid_dropout, "Comma-separated rates");
  grid->add_option("--top-k", top_k, "Values per axis kept for stage 2");
  grid->add_option("--out", grid_out, "Trial report CSV");
  grid->add_option("--seed", seed, "Seed for all randomness");
  grid_corpus.Attach(grid);
  grid_gru.Attach(grid);

  // stack
  auto* stack = app.add_subcommand("stack", "Train the stacked GRU ensemble");
  std::string members_arg, combiner = "stacker", weights_arg, stack_out;
  std::size_t folds = 5;
  bool include_mnb = false, include_logreg = false;
  CorpusFlags stack_corpus;
  GruFlags stack_gru;
  stack->add_option("--train", train_path, "Training corpus")->required();
  stack->add_option("--out", stack_out, "Ensemble manifest")->required();
  stack->add_option("--members", members_arg,
                    "Comma-separated single-order specs "
                    "(default char:2-2,char:3-3,char:4-4,char:5-5,word:1-1)");
  stack->add_option("--combiner", combiner, "stacker | median | weighted")
      ->check(CLI::IsMember({"stacker", "median", "weighted"}));
  stack->add_option("--weights", weights_arg,
                    "Comma-separated member weights (weighted combiner)");
  stack->add_option("--folds", folds, "Cross-validation folds for lambda");
  stack->add_option("--split", split_fraction,
                    "Fraction used to train members");
  stack->add_flag("--include-mnb", include_mnb, "Add an MNB member");
  stack->add_flag("--include-logreg", include_logreg, "Add a logreg member");
  stack->add_option("--seed", seed, "Seed for all randomness");
  stack_corpus.Attach(stack);
  stack_gru.Attach(stack);

  // prefix-scan
  auto* scan = app.add_subcommand("prefix-scan",
                                  "Classify growing word prefixes");
  std::string sentence;
  scan->add_option("--model", model_path, "Model file")->required();
  scan->add_option("--sentence", sentence,
                   "Sentence to scan (default: each stdin line)");

  // overlap
  auto* overlap = app.add_subcommand("overlap", "Word-type overlap ratio");
  std::string corpus_path, source, target;
  CorpusFlags overlap_corpus;
  overlap->add_option("--corpus", corpus_path, "Labeled corpus")->required();
  overlap->add_option("--source", source, "Source language")->required();
  overlap->add_option("--target", target, "Target language")->required();
  overlap_corpus.Attach(overlap);

  // export-vectors
  auto* exportv = app.add_subcommand("export-vectors",
                                     "Sparse count rows for external tools");
  std::string export_spec = "word:1-5", export_out;
  int export_min_count = 1;
  std::optional<std::size_t> export_max_vocab;
  CorpusFlags export_corpus;
  exportv->add_option("--corpus", corpus_path, "Labeled corpus")->required();
  exportv->add_option("--ngram", export_spec, "Feature spec");
  exportv->add_option("--out", export_out, "Output (default stdout)");
  exportv->add_option("--min-count", export_min_count, "Frequency floor");
  exportv->add_option("--max-vocab", export_max_vocab, "Vocabulary cap");
  export_corpus.Attach(exportv);

  // bench-external
  auto* bench = app.add_subcommand("bench-external",
                                   "Score an external detector");
  std::string gold_path, adapter_cmd, adapter_url, policy_path;
  std::size_t parallel = 4;
  int attempts = 3;
  int backoff_ms = 100;
  CorpusFlags bench_corpus;
  bench->add_option("--gold", gold_path, "Gold corpus")->required();
  auto* cmd_opt =
      bench->add_option("--adapter-cmd", adapter_cmd, "Line-oriented command");
  auto* url_opt = bench->add_option("--adapter-url", adapter_url,
                                    "HTTP endpoint accepting {\"text\"}");
  cmd_opt->excludes(url_opt);
  bench->add_option("--policy", policy_path, "Support policy JSON");
  bench->add_option("--parallel", parallel, "Concurrent HTTP requests");
  bench->add_option("--attempts", attempts, "Attempts per request");
  bench->add_option("--backoff-ms", backoff_ms, "Initial retry delay");
  bench->add_option("--confusion", confusion_path, "Confusion matrix CSV");
  bench_corpus.Attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "lide: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*train) {
      const auto corpus = train_corpus.Read(train_path, err);
      std::optional<Corpus> valid;
      if (!valid_path.empty()) {
        valid = train_corpus.Read(valid_path, corpus.registry_ptr(), err);
      }
      std::unique_ptr<Classifier> model;
      std::vector<EpochStats> history;
      if (train_kind == "mnb") {
        const NgramSpec spec = train_spec.empty()
                                   ? DefaultLinearSpec()
                                   : NgramSpec::Parse(train_spec);
        MnbOptions opts;
        opts.alpha = train_linear.alpha;
        opts.vocab.min_count = train_gru.min_count;
        opts.vocab.max_size = train_gru.max_vocab;
        model = std::make_unique<MnbClassifier>(
            TrainMnbClassifier(corpus, spec, opts));
      } else if (train_kind == "logreg") {
        const NgramSpec spec = train_spec.empty()
                                   ? DefaultLinearSpec()
                                   : NgramSpec::Parse(train_spec);
        LogRegOptions opts;
        opts.config.lambda = train_linear.lambda;
        opts.config.epochs = train_gru.epochs.value_or(opts.config.epochs);
        opts.config.learning_rate =
            train_gru.lr.value_or(opts.config.learning_rate);
        opts.config.batch_size = train_linear.lr_batch;
        opts.config.seed = seed;
        opts.vocab.min_count = train_gru.min_count;
        opts.vocab.max_size = train_gru.max_vocab;
        // Per-epoch curves need the vocabulary, which only exists inside
        // the trainer; rebuild a classifier view around each snapshot.
        const auto labels = DistinctLabels(corpus);
        std::optional<Vocabulary> vocab;
        if (!history_path.empty()) {
          vocab = Featurize(corpus, spec, labels, opts.vocab).vocab;
        }
        LogRegEpochCallback on_epoch;
        if (vocab) {
          on_epoch = [&](int epoch, const LogRegModel& snapshot) {
            LogRegClassifier view(labels, corpus.registry_ptr(), spec, *vocab,
                                  snapshot);
            history.push_back(
                {epoch, CorpusAccuracy(view, corpus),
                 valid ? CorpusAccuracy(view, *valid) : 0.0});
          };
        }
        model = std::make_unique<LogRegClassifier>(
            TrainLogRegClassifier(corpus, spec, opts, on_epoch));
      } else {
        const NgramSpec spec = train_spec.empty()
                                   ? NgramSpec{Unit::kChar, 3, 3,
                                               BoundaryMode::kRestricted}
                                   : NgramSpec::Parse(train_spec);
        Corpus fit = corpus;
        if (!valid) {
          auto parts = Split(corpus, {split_fraction, seed, true});
          fit = std::move(parts.first);
          valid = std::move(parts.second);
        }
        auto gru = std::make_unique<GruClassifier>(TrainGru(
            fit, *valid, spec, train_gru.Config(seed),
            [&](const EpochStats& s) {
              err << "epoch " << s.epoch << " train_acc "
                  << Fixed(s.train_accuracy) << " valid_acc "
                  << Fixed(s.valid_accuracy) << '\n';
            }));
        history = gru->history();
        model = std::move(gru);
      }
      SaveModel(*model, train_out);
      if (!history_path.empty()) {
        Output h(history_path, out);
        WriteHistoryCsv(history, *h);
      }
      out << "trained " << model->Describe() << " on " << corpus.size()
          << " sentences, " << model->num_classes()
          << " classes; training accuracy "
          << Fixed(CorpusAccuracy(*model, corpus));
      if (valid) {
        out << "; validation accuracy " << Fixed(CorpusAccuracy(*model, *valid));
      }
      out << '\n';
      return 0;
    }

    if (*predict) {
      const auto model = LoadModel(model_path);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto bad = utf8::FindInvalid(line); bad != std::string::npos) {
          throw Error("invalid UTF-8 on input at byte offset " +
                      std::to_string(bad));
        }
        if (WordTokens(line).empty()) {
          out << kUndeterminedLabel << '\n';
        } else {
          out << model->Predict(line) << '\n';
        }
      }
      return 0;
    }

    if (*evaluate) {
      const auto model = LoadModel(model_path);
      ParseReport report;
      const Corpus test = KnownOnly(ParseDslFile(
          test_path, model->registry_ptr(), {eval_corpus.label_first},
          &report));
      const auto predictions = PredictAll(*model, test);
      const auto golds = Golds(test);
      const double acc = Accuracy(predictions, golds);
      if (!predictions_path.empty()) {
        Output p(predictions_path, out);
        for (const auto& l : predictions) *p << l << '\n';
      }
      if (!confusion_path.empty()) {
        Output c(confusion_path, out);
        WriteConfusionCsv(
            Confusion(predictions, golds, model->registry(), collapse), *c);
      }
      std::size_t correct = 0;
      for (std::size_t i = 0; i < golds.size(); ++i) {
        correct += predictions[i] == golds[i];
      }
      out << "accuracy " << Fixed(acc) << " (" << correct << "/"
          << golds.size() << ")\n";
      return 0;
    }

    if (*sweep) {
      const auto corpus = sweep_corpus.Read(train_path, err);
      Corpus fit = corpus;
      Corpus valid;
      if (!valid_path.empty()) {
        valid = sweep_corpus.Read(valid_path, corpus.registry_ptr(), err);
      } else {
        std::tie(fit, valid) = Split(corpus, {split_fraction, seed, true});
      }
      const auto [from, to] = ParseRange(sweep_range);
      SweepOptions opts;
      opts.mnb.alpha = sweep_linear.alpha;
      opts.logreg.config.lambda = sweep_linear.lambda;
      opts.logreg.config.epochs = sweep_epochs;
      opts.logreg.config.batch_size = sweep_linear.lr_batch;
      opts.logreg.config.seed = seed;
      const auto rows = NgramSweep(
          fit, valid, ParseLinearKind(sweep_kind),
          sweep_unit == "char" ? Unit::kChar : Unit::kWord, from, to,
          sweep_mode == "spanning" ? BoundaryMode::kSpanning
                                   : BoundaryMode::kRestricted,
          opts);
      Output o(sweep_out, out);
      WriteSweepCsv(rows, *o);
      return 0;
    }

    if (*grid) {
      const auto devel = grid_corpus.Read(devel_path, err);
      SearchGrids grids{ParseList<int>(grid_epochs, "epochs"),
                        ParseList<int>(grid_hidden, "hidden"),
                        ParseList<double>(grid_dropout, "dropout"), top_k};
      const auto report =
          TwoStageSearch(devel, NgramSpec::Parse(grid_spec),
                         grid_gru.Config(seed), grids, seed);
      if (!grid_out.empty()) {
        Output o(grid_out, out);
        WriteSearchCsv(report, *o);
      }
      out << "best epochs " << report.best.epochs << " hidden "
          << report.best.hidden << " dropout " << report.best.dropout
          << " valid_acc " << Fixed(report.best_accuracy) << '\n';
      return 0;
    }

    if (*stack) {
      const auto corpus = stack_corpus.Read(train_path, err);
      EnsembleOptions opts;
      if (!members_arg.empty()) {
        opts.roster.clear();
        for (const auto& s : SplitList(members_arg)) {
          opts.roster.push_back(NgramSpec::Parse(s));
        }
      }
      opts.gru = stack_gru.Config(seed);
      opts.include_mnb = include_mnb;
      opts.include_logreg = include_logreg;
      opts.logreg.config.seed = seed;
      opts.combiner = ParseCombiner(combiner);
      if (!weights_arg.empty()) {
        opts.weights = ParseList<double>(weights_arg, "weight");
      }
      opts.stacker.folds = folds;
      opts.stacker.seed = seed;
      opts.split = {split_fraction, seed, true};
      EnsembleTrainReport report;
      const auto model = TrainEnsemble(corpus, opts, &report);
      SaveModel(model, stack_out);
      for (std::size_t k = 0; k < model.members().size(); ++k) {
        out << "member " << model.members()[k]->Describe()
            << " held-out accuracy " << Fixed(report.member_valid_accuracy[k])
            << '\n';
      }
      if (opts.combiner == CombinerKind::kStacker) {
        out << "stacker lambda " << report.selection.lambda << '\n';
      }
      out << "wrote " << model.Describe() << " to " << stack_out << '\n';
      return 0;
    }

    if (*scan) {
      const auto model = LoadModel(model_path);
      auto emit = [&](const std::string& s) {
        WriteTrajectoryTsv(PrefixScan(*model, s), out);
      };
      if (!sentence.empty()) {
        emit(sentence);
      } else {
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
          if (WordTokens(line).empty()) continue;
          if (!first) out << '\n';
          first = false;
          emit(line);
        }
      }
      return 0;
    }

    if (*overlap) {
      const auto corpus = overlap_corpus.Read(corpus_path, err);
      out << Fixed(VocabOverlap(corpus, source, target)) << '\n';
      return 0;
    }

    if (*exportv) {
      const auto corpus = export_corpus.Read(corpus_path, err);
      const NgramSpec spec = NgramSpec::Parse(export_spec);
      VocabBuilder builder;
      for (const auto& s : corpus.sentences()) {
        builder.Add(NgramsUpTo(s.text, spec));
      }
      const auto vocab = builder.Build(export_min_count, export_max_vocab);
      Output o(export_out, out);
      for (const auto& s : corpus.sentences()) {
        *o << s.label;
        for (const auto& [idx, count] :
             VectorizeCounts(NgramsUpTo(s.text, spec), vocab).entries) {
          *o << ' ' << idx << ':' << count;
        }
        *o << '\n';
      }
      return 0;
    }

    if (*bench) {
      const auto gold = bench_corpus.Read(gold_path, err);
      if (adapter_cmd.empty() == adapter_url.empty()) {
        err << "lide: bench-external needs exactly one of --adapter-cmd or "
               "--adapter-url\n";
        return 2;
      }
      AdapterSpec spec;
      spec.kind = adapter_cmd.empty() ? AdapterKind::kHttp
                                      : AdapterKind::kSubprocess;
      spec.command = adapter_cmd;
      spec.url = adapter_url;
      spec.parallelism = parallel;
      spec.max_attempts = attempts;
      spec.initial_backoff = std::chrono::milliseconds(backoff_ms);
      const SupportPolicy policy = policy_path.empty()
                                       ? SupportPolicy{}
                                       : SupportPolicy::FromJsonFile(policy_path);
      policy.Validate(gold.registry());
      const auto predictions = RunAdapter(spec, gold);
      const auto score = ScoreExternal(predictions, gold, policy);
      if (!confusion_path.empty()) {
        Output c(confusion_path, out);
        WriteConfusionCsv(score.confusion, *c);
      }
      out << "accuracy " << Fixed(score.accuracy) << " evaluated "
          << score.evaluated << " skipped " << score.skipped << " missing "
          << score.missing << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "lide: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace lide::cli
