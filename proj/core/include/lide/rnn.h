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

#ifndef LIDE_RNN_H_
#define LIDE_RNN_H_

#include <Eigen/Core>
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
#include "lide/linear.h"

namespace lide {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Named view of one contiguous parameter array.
struct ParamBlock {
  std::string_view name;
  std::span<double> values;
};
struct ConstParamBlock {
  std::string_view name;
  std::span<const double> values;
};

// Embedding + single GRU layer + softmax output layer.
//   z_t = sigmoid(Wz e_t + Uz h_{t-1} + bz)
//   r_t = sigmoid(Wr e_t + Ur h_{t-1} + br)
//   c_t = tanh(Wc e_t + Uc (r_t * h_{t-1}) + bc)
//   h_t = (1 - z_t) * h_{t-1} + z_t * c_t
struct GruParams {
  Matrix embedding;  // V x d; row 0 is the OOV token
  Matrix w_update, u_update;
  Vector b_update;
  Matrix w_reset, u_reset;
  Vector b_reset;
  Matrix w_cand, u_cand;
  Vector b_cand;
  Matrix w_out;  // C x H
  Vector b_out;

  static GruParams Zeros(std::size_t vocab_size, std::size_t embed_dim,
                         std::size_t hidden, std::size_t num_classes);

  std::size_t vocab_size() const { return embedding.rows(); }
  std::size_t embed_dim() const { return embedding.cols(); }
  std::size_t hidden() const { return u_update.rows(); }
  std::size_t num_classes() const { return w_out.rows(); }

  // Fixed order: embedding, update, reset, candidate, output.
  std::vector<ParamBlock> Blocks();
  std::vector<ConstParamBlock> Blocks() const;

  // Throws lide::Error if shapes are inconsistent.
  void CheckShapes() const;
  bool AllFinite() const;
  void SetZero();
};

enum class Pooling { kMean, kLast };

// Everything the backward pass needs from one forward pass.
struct GruCache {
  std::vector<std::uint32_t> ids;
  std::vector<Vector> h;  // h[0] = 0, h[t] for t = 1..T
  std::vector<Vector> z, r, c;
  Vector pooled;
  Vector dropout_mask;  // empty when no dropout
  double dropout_p = 0.0;
  Vector features;  // pooled vector after dropout, fed to the output layer
  Vector probs;
  Pooling pooling = Pooling::kMean;
};

// Runs the cell over `ids` (non-empty, every id < V). With a mask, the
// pooled state becomes (pooled * mask) / (1 - dropout_p).
GruCache GruForward(const GruParams& params,
                    std::span<const std::uint32_t> ids,
                    Pooling pooling = Pooling::kMean,
                    const Vector* dropout_mask = nullptr,
                    double dropout_p = 0.0);

// Adds d(-log p_gold)/d(params) for the cached example into `grads`.
void GruBackwardAccumulate(const GruParams& params, const GruCache& cache,
                           int gold, GruParams* grads);

// Exact cross-entropy gradients of a single example.
GruParams GruBackward(const GruParams& params, const GruCache& cache,
                      int gold);

double GruLoss(const GruParams& params, std::span<const std::uint32_t> ids,
               int gold, Pooling pooling = Pooling::kMean,
               const Vector* dropout_mask = nullptr, double dropout_p = 0.0);

struct TrainConfig {
  int epochs = 10;
  int hidden = 64;
  double dropout = 0.2;
  int embed_dim = 32;
  double learning_rate = 1e-3;
  std::size_t batch_size = 16;
  std::size_t max_len = kDefaultMaxSequenceLength;
  std::uint64_t seed = 0;
  Pooling pooling = Pooling::kMean;
  double clip_norm = 0.0;  // global-norm cap; 0 disables
  double init_scale = 0.08;
  int min_count = 1;
  std::optional<std::size_t> max_vocab;

  void Validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// H=768, p=0.45, 20 epochs: the configuration the two-stage search
// settled on for the full DSL data.
TrainConfig PaperScaleConfig();

struct EpochStats {
  int epoch = 0;
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;

  bool operator==(const EpochStats&) const = default;
};

class GruClassifier : public Classifier {
 public:
  GruClassifier(std::vector<std::string> labels,
                std::shared_ptr<const Registry> registry, NgramSpec spec,
                Vocabulary vocab, GruParams params, TrainConfig config,
                std::vector<EpochStats> history);

  // Uniform when the text yields no tokens for this model's n-gram order.
  std::vector<double> PredictProba(std::string_view text) const override;
  std::string Kind() const override { return "gru"; }
  bool Covers(std::string_view text) const override {
    return !Encode(text).empty();
  }
  std::string Describe() const override;

  // Empty when the text yields no tokens.
  std::vector<std::uint32_t> Encode(std::string_view text) const;

  const NgramSpec& spec() const { return spec_; }
  const Vocabulary& vocab() const { return vocab_; }
  const GruParams& params() const { return params_; }
  const TrainConfig& config() const { return config_; }
  const std::vector<EpochStats>& history() const { return history_; }

 private:
  NgramSpec spec_;
  Vocabulary vocab_;
  GruParams params_;
  TrainConfig config_;
  std::vector<EpochStats> history_;
};

// Seeded uniform(-init_scale, init_scale) matrices and zero biases.
GruParams InitGruParams(std::size_t vocab_size, std::size_t num_classes,
                        const TrainConfig& config);

using GruEpochCallback = std::function<void(const EpochStats&)>;

// Adam training with per-example inverted dropout on the pooled state.
// `spec` must name a single n-gram order. Sentences that produce no tokens
// are skipped for training and scored as uniform for accuracy.
GruClassifier TrainGru(const Corpus& train, const Corpus& valid,
                       const NgramSpec& spec, const TrainConfig& config,
                       const GruEpochCallback& on_epoch = {});

// Writes `epoch,train_acc,valid_acc` rows.
void WriteHistoryCsv(const std::vector<EpochStats>& history,
                     std::ostream& out);

struct SearchGrids {
  std::vector<int> epochs;
  std::vector<int> hidden;
  std::vector<double> dropout;
  // Values per axis carried from the one-at-a-time sweeps into the grid.
  std::size_t top_k = 2;
};

struct SearchTrial {
  int stage = 0;
  TrainConfig config;
  double accuracy = 0.0;
};

struct SearchReport {
  TrainConfig best;
  double best_accuracy = 0.0;
  std::vector<SearchTrial> trials;
};

// Orders trials: higher accuracy, then fewer hidden units, then more
// dropout, then fewer epochs.
bool BetterTrial(const SearchTrial& a, const SearchTrial& b);

using ConfigEvaluator = std::function<double(const TrainConfig&)>;

// Stage 1 sweeps each axis with the other two held at `base`; stage 2
// evaluates the cross product of each axis's top_k values.
SearchReport TwoStageSearch(const TrainConfig& base, const SearchGrids& grids,
                            const ConfigEvaluator& evaluate);

// Trains on a 75% split of `devel` and scores on the remaining 25%.
SearchReport TwoStageSearch(const Corpus& devel, const NgramSpec& spec,
                            const TrainConfig& base, const SearchGrids& grids,
                            std::uint64_t split_seed);

void WriteSearchCsv(const SearchReport& report, std::ostream& out);

}  // namespace lide

#endif  // LIDE_RNN_H_
