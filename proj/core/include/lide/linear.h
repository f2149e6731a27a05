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

#ifndef LIDE_LINEAR_H_
#define LIDE_LINEAR_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lide/classifier.h"
#include "lide/corpus.h"
#include "lide/features.h"

namespace lide {

// Multinomial Naive Bayes statistics over a fixed vocabulary.
struct MnbModel {
  std::size_t num_classes = 0;
  std::size_t vocab_size = 0;
  double alpha = 1.0;
  std::vector<double> log_priors;      // num_classes
  std::vector<double> log_likelihood;  // num_classes x vocab_size, row-major

  double LogLikelihood(std::size_t c, std::size_t t) const {
    return log_likelihood[c * vocab_size + t];
  }
};

// Laplace/Lidstone-smoothed estimate. Every class in [0, num_classes) needs
// at least one example.
MnbModel TrainMnb(std::span<const SparseVector> rows,
                  std::span<const int> labels, std::size_t num_classes,
                  std::size_t vocab_size, double alpha = 1.0);

// Normalized log posterior per class.
std::vector<double> MnbLogPosterior(const MnbModel& model,
                                    const SparseVector& x);

struct LogRegConfig {
  double lambda = 1e-5;
  int epochs = 10;
  double learning_rate = 0.05;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
};

// Softmax regression: p = softmax(W x + b).
struct LogRegModel {
  std::size_t num_classes = 0;
  std::size_t num_features = 0;
  std::vector<double> weights;  // num_classes x num_features, row-major
  std::vector<double> bias;     // num_classes
  LogRegConfig config;

  double Weight(std::size_t c, std::size_t f) const {
    return weights[c * num_features + f];
  }
};

LogRegModel ZeroLogReg(std::size_t num_classes, std::size_t num_features);

// Called after each epoch with the current parameters.
using LogRegEpochCallback =
    std::function<void(int epoch, const LogRegModel& model)>;

// Mini-batch SGD on mean cross-entropy + lambda/2 ||W||^2 (bias not
// penalized) with a seeded shuffle per epoch. Throws lide::Error naming
// the epoch and batch when the loss becomes non-finite.
LogRegModel TrainLogReg(std::span<const SparseVector> rows,
                        std::span<const int> labels, std::size_t num_classes,
                        std::size_t num_features, const LogRegConfig& config,
                        const LogRegEpochCallback& on_epoch = {});

std::vector<double> LogRegScores(const LogRegModel& model,
                                 const SparseVector& x);
std::vector<double> LogRegProba(const LogRegModel& model,
                                const SparseVector& x);

// Training objective and its exact gradient, exposed for verification.
double LogRegObjective(const LogRegModel& model,
                       std::span<const SparseVector> rows,
                       std::span<const int> labels, double lambda);
void LogRegGradient(const LogRegModel& model,
                    std::span<const SparseVector> rows,
                    std::span<const int> labels, double lambda,
                    std::vector<double>* grad_weights,
                    std::vector<double>* grad_bias);

// Numerically stable softmax; returns probabilities.
std::vector<double> Softmax(std::span<const double> logits);

// Settings shared by the corpus-level trainers.
struct VocabOptions {
  int min_count = 1;
  std::optional<std::size_t> max_size;
};

// Featurized corpus: vocabulary plus one count row per sentence.
struct FeatureMatrix {
  Vocabulary vocab;
  std::vector<SparseVector> rows;
  std::vector<int> labels;
};

// Builds the vocabulary from `corpus` and vectorizes it.
FeatureMatrix Featurize(const Corpus& corpus, const NgramSpec& spec,
                        const std::vector<std::string>& labels,
                        const VocabOptions& vocab_options);
// Vectorizes against an existing vocabulary.
std::vector<SparseVector> Vectorize(const Corpus& corpus,
                                    const NgramSpec& spec,
                                    const Vocabulary& vocab);

class MnbClassifier : public Classifier {
 public:
  MnbClassifier(std::vector<std::string> labels,
                std::shared_ptr<const Registry> registry, NgramSpec spec,
                Vocabulary vocab, MnbModel model);

  std::vector<double> PredictProba(std::string_view text) const override;
  std::string Kind() const override { return "mnb"; }
  bool Covers(std::string_view text) const override {
    return !NgramsUpTo(text, spec_).empty();
  }
  std::string Describe() const override;

  const NgramSpec& spec() const { return spec_; }
  const Vocabulary& vocab() const { return vocab_; }
  const MnbModel& model() const { return model_; }
  int min_count() const { return vocab_.min_count(); }

 private:
  NgramSpec spec_;
  Vocabulary vocab_;
  MnbModel model_;
};

struct MnbOptions {
  double alpha = 1.0;
  VocabOptions vocab;
};

MnbClassifier TrainMnbClassifier(const Corpus& train, const NgramSpec& spec,
                                 const MnbOptions& options = {});

class LogRegClassifier : public Classifier {
 public:
  LogRegClassifier(std::vector<std::string> labels,
                   std::shared_ptr<const Registry> registry, NgramSpec spec,
                   Vocabulary vocab, LogRegModel model);

  std::vector<double> PredictProba(std::string_view text) const override;
  std::string Kind() const override { return "logreg"; }
  bool Covers(std::string_view text) const override {
    return !NgramsUpTo(text, spec_).empty();
  }
  std::string Describe() const override;

  const NgramSpec& spec() const { return spec_; }
  const Vocabulary& vocab() const { return vocab_; }
  const LogRegModel& model() const { return model_; }

 private:
  NgramSpec spec_;
  Vocabulary vocab_;
  LogRegModel model_;
};

struct LogRegOptions {
  LogRegConfig config;
  VocabOptions vocab;
};

// Default feature set for both linear models: char 1..9-grams restricted to
// word boundaries.
NgramSpec DefaultLinearSpec();

LogRegClassifier TrainLogRegClassifier(const Corpus& train,
                                       const NgramSpec& spec,
                                       const LogRegOptions& options = {},
                                       const LogRegEpochCallback& on_epoch =
                                           {});

}  // namespace lide

#endif  // LIDE_LINEAR_H_
