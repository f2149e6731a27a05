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

#include "lide/linear.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lide/error.h"
#include "lide/random.h"

namespace lide {

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<int> LabelIndices(const Corpus& corpus,
                              const std::vector<std::string>& labels) {
  std::vector<int> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) {
    auto it = std::find(labels.begin(), labels.end(), s.label);
    if (it == labels.end()) {
      throw Error("label '" + s.label + "' is not among the model's classes");
    }
    out.push_back(static_cast<int>(it - labels.begin()));
  }
  return out;
}

namespace {

double LogSumExp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void CheckRows(std::span<const SparseVector> rows, std::span<const int> labels,
               std::size_t num_classes, std::size_t num_features) {
  if (rows.size() != labels.size()) {
    throw Error("training: " + std::to_string(rows.size()) + " rows but " +
                std::to_string(labels.size()) + " labels");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw Error("training: label index " + std::to_string(y) +
                  " out of range");
    }
  }
  for (const auto& r : rows) {
    if (!r.empty() && r.entries.back().first >= num_features) {
      throw Error("training: feature index " +
                  std::to_string(r.entries.back().first) +
                  " outside vocabulary of size " +
                  std::to_string(num_features));
    }
  }
}

}  // namespace

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& x : p) {
    x = std::exp(x - m);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

MnbModel TrainMnb(std::span<const SparseVector> rows,
                  std::span<const int> labels, std::size_t num_classes,
                  std::size_t vocab_size, double alpha) {
  if (!(alpha > 0.0)) throw Error("mnb: alpha must be positive");
  if (num_classes == 0) throw Error("mnb: no classes");
  if (vocab_size == 0) throw Error("mnb: empty vocabulary");
  CheckRows(rows, labels, num_classes, vocab_size);

  std::vector<double> counts(num_classes * vocab_size, 0.0);
  std::vector<double> totals(num_classes, 0.0);
  std::vector<std::size_t> docs(num_classes, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    ++docs[c];
    for (const auto& [t, v] : rows[i].entries) {
      counts[c * vocab_size + t] += v;
      totals[c] += v;
    }
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (docs[c] == 0) {
      throw Error("mnb: class " + std::to_string(c) + " has no examples");
    }
  }

  MnbModel m;
  m.num_classes = num_classes;
  m.vocab_size = vocab_size;
  m.alpha = alpha;
  m.log_priors.resize(num_classes);
  m.log_likelihood.resize(num_classes * vocab_size);
  const double n = static_cast<double>(rows.size());
  for (std::size_t c = 0; c < num_classes; ++c) {
    m.log_priors[c] = std::log(static_cast<double>(docs[c]) / n);
    const double denom =
        std::log(totals[c] + alpha * static_cast<double>(vocab_size));
    for (std::size_t t = 0; t < vocab_size; ++t) {
      m.log_likelihood[c * vocab_size + t] =
          std::log(counts[c * vocab_size + t] + alpha) - denom;
    }
  }
  return m;
}

std::vector<double> MnbLogPosterior(const MnbModel& model,
                                    const SparseVector& x) {
  std::vector<double> score = model.log_priors;
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    for (const auto& [t, v] : x.entries) {
      score[c] += v * model.LogLikelihood(c, t);
    }
  }
  const double z = LogSumExp(score);
  for (double& s : score) s -= z;
  return score;
}

LogRegModel ZeroLogReg(std::size_t num_classes, std::size_t num_features) {
  LogRegModel m;
  m.num_classes = num_classes;
  m.num_features = num_features;
  m.weights.assign(num_classes * num_features, 0.0);
  m.bias.assign(num_classes, 0.0);
  return m;
}

std::vector<double> LogRegScores(const LogRegModel& model,
                                 const SparseVector& x) {
  std::vector<double> z = model.bias;
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    const double* row = model.weights.data() + c * model.num_features;
    for (const auto& [f, v] : x.entries) {
      if (f < model.num_features) z[c] += row[f] * v;
    }
  }
  return z;
}

std::vector<double> LogRegProba(const LogRegModel& model,
                                const SparseVector& x) {
  return Softmax(LogRegScores(model, x));
}

double LogRegObjective(const LogRegModel& model,
                       std::span<const SparseVector> rows,
                       std::span<const int> labels, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto z = LogRegScores(model, rows[i]);
    loss += LogSumExp(z) - z[static_cast<std::size_t>(labels[i])];
  }
  loss /= static_cast<double>(rows.size());
  double norm2 = 0.0;
  for (double w : model.weights) norm2 += w * w;
  return loss + 0.5 * lambda * norm2;
}

void LogRegGradient(const LogRegModel& model,
                    std::span<const SparseVector> rows,
                    std::span<const int> labels, double lambda,
                    std::vector<double>* grad_weights,
                    std::vector<double>* grad_bias) {
  const std::size_t C = model.num_classes;
  const std::size_t V = model.num_features;
  grad_weights->assign(C * V, 0.0);
  grad_bias->assign(C, 0.0);
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto p = LogRegProba(model, rows[i]);
    p[static_cast<std::size_t>(labels[i])] -= 1.0;
    for (std::size_t c = 0; c < C; ++c) {
      (*grad_bias)[c] += p[c] * inv_n;
      for (const auto& [f, v] : rows[i].entries) {
        (*grad_weights)[c * V + f] += p[c] * v * inv_n;
      }
    }
  }
  for (std::size_t k = 0; k < C * V; ++k) {
    (*grad_weights)[k] += lambda * model.weights[k];
  }
}

LogRegModel TrainLogReg(std::span<const SparseVector> rows,
                        std::span<const int> labels, std::size_t num_classes,
                        std::size_t num_features, const LogRegConfig& config,
                        const LogRegEpochCallback& on_epoch) {
  if (config.lambda < 0.0) throw Error("logreg: lambda must be >= 0");
  if (config.epochs < 1) throw Error("logreg: epochs must be >= 1");
  if (config.batch_size < 1) throw Error("logreg: batch size must be >= 1");
  if (rows.empty()) throw Error("logreg: no training rows");
  if (num_classes == 0) throw Error("logreg: no classes");
  CheckRows(rows, labels, num_classes, num_features);

  const std::size_t C = num_classes;
  const std::size_t V = num_features;
  const double lr = config.learning_rate;

  // W = scale * raw. The L2 term is applied as the proximal step
  // W <- W / (1 + lr * lambda), which only touches `scale` and stays stable
  // for any lambda.
  std::vector<double> raw(C * V, 0.0);
  double scale = 1.0;
  std::vector<double> bias(C, 0.0);

  LogRegModel snapshot = ZeroLogReg(C, V);
  snapshot.config = config;
  auto materialize = [&](LogRegModel* m) {
    for (std::size_t k = 0; k < raw.size(); ++k) m->weights[k] = scale * raw[k];
    m->bias = bias;
  };

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);

  std::vector<double> z(C);
  std::vector<std::pair<std::size_t, std::vector<double>>> residuals;
  std::vector<double> grad_bias(C);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(&order);
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      residuals.clear();
      std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
      double loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        const auto y = static_cast<std::size_t>(labels[i]);
        for (std::size_t c = 0; c < C; ++c) {
          double acc = 0.0;
          const double* row = raw.data() + c * V;
          for (const auto& [f, v] : rows[i].entries) acc += row[f] * v;
          z[c] = scale * acc + bias[c];
        }
        auto p = Softmax(z);
        loss -= std::log(std::max(p[y], 1e-300));
        p[y] -= 1.0;
        for (std::size_t c = 0; c < C; ++c) grad_bias[c] += p[c] * inv_b;
        residuals.emplace_back(i, std::move(p));
      }
      if (!std::isfinite(loss)) {
        throw Error("logreg: non-finite loss at epoch " +
                    std::to_string(epoch + 1) + ", batch " +
                    std::to_string(batch_index));
      }
      const double step = lr * inv_b / scale;
      for (const auto& [i, r] : residuals) {
        for (std::size_t c = 0; c < C; ++c) {
          double* row = raw.data() + c * V;
          const double g = step * r[c];
          for (const auto& [f, v] : rows[i].entries) row[f] -= g * v;
        }
      }
      for (std::size_t c = 0; c < C; ++c) bias[c] -= lr * grad_bias[c];
      scale /= 1.0 + lr * config.lambda;
      if (scale < 1e-6) {
        for (double& w : raw) w *= scale;
        scale = 1.0;
      }
    }
    for (std::size_t c = 0; c < C; ++c) {
      if (!std::isfinite(bias[c])) {
        throw Error("logreg: non-finite parameters after epoch " +
                    std::to_string(epoch + 1));
      }
    }
    if (on_epoch) {
      materialize(&snapshot);
      on_epoch(epoch + 1, snapshot);
    }
  }
  materialize(&snapshot);
  return snapshot;
}

NgramSpec DefaultLinearSpec() {
  return NgramSpec{Unit::kChar, 1, 9, BoundaryMode::kRestricted};
}

std::vector<SparseVector> Vectorize(const Corpus& corpus,
                                    const NgramSpec& spec,
                                    const Vocabulary& vocab) {
  std::vector<SparseVector> rows;
  rows.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) {
    rows.push_back(VectorizeCounts(NgramsUpTo(s.text, spec), vocab));
  }
  return rows;
}

FeatureMatrix Featurize(const Corpus& corpus, const NgramSpec& spec,
                        const std::vector<std::string>& labels,
                        const VocabOptions& vocab_options) {
  VocabBuilder builder;
  for (const auto& s : corpus.sentences()) {
    builder.Add(NgramsUpTo(s.text, spec));
  }
  FeatureMatrix fm;
  fm.vocab = builder.Build(vocab_options.min_count, vocab_options.max_size);
  fm.rows = Vectorize(corpus, spec, fm.vocab);
  fm.labels = LabelIndices(corpus, labels);
  return fm;
}

MnbClassifier::MnbClassifier(std::vector<std::string> labels,
                             std::shared_ptr<const Registry> registry,
                             NgramSpec spec, Vocabulary vocab, MnbModel model)
    : Classifier(std::move(labels), std::move(registry)),
      spec_(spec),
      vocab_(std::move(vocab)),
      model_(std::move(model)) {
  if (model_.num_classes != num_classes() ||
      model_.vocab_size != vocab_.size()) {
    throw Error("mnb: model dimensions do not match labels/vocabulary");
  }
}

std::vector<double> MnbClassifier::PredictProba(std::string_view text) const {
  auto lp = MnbLogPosterior(model_,
                            VectorizeCounts(NgramsUpTo(text, spec_), vocab_));
  for (double& v : lp) v = std::exp(v);
  return lp;
}

std::string MnbClassifier::Describe() const {
  return "mnb " + spec_.ToString();
}

MnbClassifier TrainMnbClassifier(const Corpus& train, const NgramSpec& spec,
                                 const MnbOptions& options) {
  if (train.empty()) throw Error("mnb: training corpus is empty");
  auto labels = DistinctLabels(train);
  auto fm = Featurize(train, spec, labels, options.vocab);
  auto model = TrainMnb(fm.rows, fm.labels, labels.size(), fm.vocab.size(),
                        options.alpha);
  return MnbClassifier(std::move(labels), train.registry_ptr(), spec,
                       std::move(fm.vocab), std::move(model));
}

LogRegClassifier::LogRegClassifier(std::vector<std::string> labels,
                                   std::shared_ptr<const Registry> registry,
                                   NgramSpec spec, Vocabulary vocab,
                                   LogRegModel model)
    : Classifier(std::move(labels), std::move(registry)),
      spec_(spec),
      vocab_(std::move(vocab)),
      model_(std::move(model)) {
  if (model_.num_classes != num_classes() ||
      model_.num_features != vocab_.size()) {
    throw Error("logreg: model dimensions do not match labels/vocabulary");
  }
}

std::vector<double> LogRegClassifier::PredictProba(
    std::string_view text) const {
  return LogRegProba(model_,
                     VectorizeCounts(NgramsUpTo(text, spec_), vocab_));
}

std::string LogRegClassifier::Describe() const {
  return "logreg " + spec_.ToString();
}

LogRegClassifier TrainLogRegClassifier(const Corpus& train,
                                       const NgramSpec& spec,
                                       const LogRegOptions& options,
                                       const LogRegEpochCallback& on_epoch) {
  if (train.empty()) throw Error("logreg: training corpus is empty");
  auto labels = DistinctLabels(train);
  auto fm = Featurize(train, spec, labels, options.vocab);
  auto model = TrainLogReg(fm.rows, fm.labels, labels.size(), fm.vocab.size(),
                           options.config, on_epoch);
  return LogRegClassifier(std::move(labels), train.registry_ptr(), spec,
                          std::move(fm.vocab), std::move(model));
}

}  // namespace lide
