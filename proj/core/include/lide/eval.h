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

#ifndef LIDE_EVAL_H_
#define LIDE_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lide/classifier.h"
#include "lide/corpus.h"
#include "lide/features.h"
#include "lide/linear.h"

namespace lide {

double Accuracy(std::span<const std::string> predictions,
                std::span<const std::string> golds);

// Rows are gold labels, columns predictions. `other` counts, per row,
// predictions that fall outside `labels` (only the external benchmark
// produces those).
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> other;

  explicit ConfusionMatrix(std::vector<std::string> labels = {});

  std::size_t size() const { return labels.size(); }
  std::uint64_t at(std::size_t gold, std::size_t predicted) const {
    return counts[gold * labels.size() + predicted];
  }
  std::uint64_t& at(std::size_t gold, std::size_t predicted) {
    return counts[gold * labels.size() + predicted];
  }
  std::uint64_t RowSum(std::size_t gold) const;
  std::uint64_t Trace() const;
  std::uint64_t Total() const;
  double Accuracy() const;

  bool operator==(const ConfusionMatrix&) const = default;
};

// Language-level matrix in registry order; any label the registry does not
// know throws.
ConfusionMatrix Confusion(std::span<const std::string> predictions,
                          std::span<const std::string> golds,
                          const Registry& registry,
                          bool collapse_groups = false);

// Sums cells within registry groups. The input must be language-level in
// registry order.
ConfusionMatrix CollapseGroups(const ConfusionMatrix& languages,
                               const Registry& registry);

void WriteConfusionCsv(const ConfusionMatrix& matrix, std::ostream& out);

enum class LinearKind { kMnb, kLogReg };
LinearKind ParseLinearKind(std::string_view name);

struct SweepRow {
  int n = 0;
  double accuracy = 0.0;
};

struct SweepOptions {
  MnbOptions mnb;
  LogRegOptions logreg;
};

// For each n in [n_from, n_to], trains a fresh model on all orders 1..n and
// records held-out accuracy.
std::vector<SweepRow> NgramSweep(const Corpus& train, const Corpus& valid,
                                 LinearKind kind, Unit unit, int n_from,
                                 int n_to, BoundaryMode mode,
                                 const SweepOptions& options = {});

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out);

struct PrefixStep {
  std::size_t words = 0;
  std::string prefix;
  std::string label;
  std::vector<double> probs;
};

struct PrefixTrajectory {
  std::string sentence;
  std::vector<PrefixStep> steps;
};

// Classifies the 1-word, 2-word, ... prefixes of the sentence.
PrefixTrajectory PrefixScan(const Classifier& model,
                            std::string_view sentence);

// `k<TAB>prefix<TAB>label<TAB>p1,...,pC`.
void WriteTrajectoryTsv(const PrefixTrajectory& trajectory,
                        std::ostream& out);

// Predictions for every sentence of the corpus, in order.
std::vector<std::string> PredictAll(const Classifier& model,
                                    const Corpus& corpus);
std::vector<std::string> Golds(const Corpus& corpus);

}  // namespace lide

#endif  // LIDE_EVAL_H_
