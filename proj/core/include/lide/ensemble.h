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

#ifndef LIDE_ENSEMBLE_H_
#define LIDE_ENSEMBLE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lide/classifier.h"
#include "lide/corpus.h"
#include "lide/features.h"
#include "lide/linear.h"
#include "lide/rnn.h"

namespace lide {

using MemberPtr = std::shared_ptr<const Classifier>;

enum class CombinerKind { kStacker, kMedian, kWeighted };

std::string_view CombinerName(CombinerKind kind);
CombinerKind ParseCombiner(std::string_view name);

// One row per sentence: member probability vectors concatenated in member
// order.
struct MetaFeatures {
  std::size_t members = 0;
  std::size_t classes = 0;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::size_t dim() const { return members * classes; }
  std::vector<SparseVector> SparseRows() const;
};

// Members must share one label list; a mismatch throws.
MetaFeatures StackFeatures(std::span<const MemberPtr> members,
                           const Corpus& corpus);

struct StackerConfig {
  std::size_t folds = 5;
  std::vector<double> lambda_ladder = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
  int epochs = 50;
  double learning_rate = 0.5;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
};

struct StackerSelection {
  double lambda = 0.0;
  // Mean held-out fold accuracy and cross-entropy per ladder rung, in
  // ladder order.
  std::vector<double> cv_accuracy;
  std::vector<double> cv_log_loss;
};

struct CrossValidation {
  double accuracy = 0.0;
  double log_loss = 0.0;
};

// Mean k-fold held-out accuracy of a logistic-regression meta model with a
// seeded fold assignment.
CrossValidation CrossValidate(const MetaFeatures& meta,
                              const LogRegConfig& config, std::size_t folds,
                              std::uint64_t fold_seed);
double CrossValidatedAccuracy(const MetaFeatures& meta,
                              const LogRegConfig& config, std::size_t folds,
                              std::uint64_t fold_seed);

// Picks lambda from the ladder by k-fold accuracy (ties go to the lower
// held-out cross-entropy, then the larger lambda), then refits on every row.
LogRegModel TrainStacker(const MetaFeatures& meta, const StackerConfig& config,
                         StackerSelection* selection = nullptr);

struct EnsemblePrediction {
  std::string label;
  std::vector<double> probs;
  std::vector<std::vector<double>> member_probs;
};

class EnsembleClassifier : public Classifier {
 public:
  // `meta` is required for the stacker; `weights` for the weighted
  // combiner.
  EnsembleClassifier(std::vector<MemberPtr> members, CombinerKind kind,
                     LogRegModel meta, std::vector<double> weights);

  std::vector<double> PredictProba(std::string_view text) const override;
  bool Covers(std::string_view text) const override;
  std::string Kind() const override { return "ensemble"; }
  std::string Describe() const override;

  EnsemblePrediction PredictDetailed(std::string_view text) const;

  // Combines already computed member vectors.
  std::vector<double> Combine(
      const std::vector<std::vector<double>>& member_probs) const;

  const std::vector<MemberPtr>& members() const { return members_; }
  CombinerKind combiner() const { return kind_; }
  const LogRegModel& meta() const { return meta_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<MemberPtr> members_;
  CombinerKind kind_;
  LogRegModel meta_;
  std::vector<double> weights_;
};

// Char 2..5-gram and word unigram members.
std::vector<NgramSpec> DefaultRoster();

struct EnsembleOptions {
  std::vector<NgramSpec> roster = DefaultRoster();
  TrainConfig gru;
  // Optional linear members (off by default).
  bool include_mnb = false;
  bool include_logreg = false;
  MnbOptions mnb;
  LogRegOptions logreg;
  CombinerKind combiner = CombinerKind::kStacker;
  std::vector<double> weights;
  StackerConfig stacker;
  // Members train on the first part; the stacker on the held-out part.
  SplitSpec split{0.9, 0, true};
};

struct EnsembleTrainReport {
  std::vector<double> member_valid_accuracy;
  StackerSelection selection;
};

// Members fit on a 90% split, the combiner on the remaining 10%.
EnsembleClassifier TrainEnsemble(const Corpus& train,
                                 const EnsembleOptions& options,
                                 EnsembleTrainReport* report = nullptr);

}  // namespace lide

#endif  // LIDE_ENSEMBLE_H_
