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

#ifndef LIDE_CLASSIFIER_H_
#define LIDE_CLASSIFIER_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lide/corpus.h"

namespace lide {

// Label emitted for input that carries no tokens at all.
inline constexpr std::string_view kUndeterminedLabel = "und";

// Index of the largest entry; ties go to the lowest index.
std::size_t ArgMax(std::span<const double> values);

// Common surface of every trained text classifier. Implementations are
// immutable after construction and safe for concurrent prediction.
class Classifier {
 public:
  Classifier(std::vector<std::string> labels,
             std::shared_ptr<const Registry> registry)
      : labels_(std::move(labels)), registry_(std::move(registry)) {}
  virtual ~Classifier() = default;

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_classes() const { return labels_.size(); }
  const Registry& registry() const { return *registry_; }
  const std::shared_ptr<const Registry>& registry_ptr() const {
    return registry_;
  }

  // Probability per label; sums to one.
  virtual std::vector<double> PredictProba(std::string_view text) const = 0;

  // "mnb", "logreg", "gru" or "ensemble".
  virtual std::string Kind() const = 0;

  // False when the text yields no tokens under this model's features.
  virtual bool Covers(std::string_view text) const = 0;

  // Kind plus feature configuration, e.g. "gru char:3-3:restricted".
  virtual std::string Describe() const = 0;

  std::string Predict(std::string_view text) const {
    const auto p = PredictProba(text);
    return labels_[ArgMax(p)];
  }

 private:
  std::vector<std::string> labels_;
  std::shared_ptr<const Registry> registry_;
};

// Class index of every sentence under `labels`; unknown labels throw.
std::vector<int> LabelIndices(const Corpus& corpus,
                              const std::vector<std::string>& labels);

}  // namespace lide

#endif  // LIDE_CLASSIFIER_H_
