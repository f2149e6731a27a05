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

#include "lide/ensemble.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "lide/error.h"
#include "lide/log.h"
#include "lide/random.h"

namespace lide {

std::string_view CombinerName(CombinerKind kind) {
  switch (kind) {
    case CombinerKind::kStacker:
      return "stacker";
    case CombinerKind::kMedian:
      return "median";
    case CombinerKind::kWeighted:
      return "weighted";
  }
  return "stacker";
}

CombinerKind ParseCombiner(std::string_view name) {
  if (name == "stacker") return CombinerKind::kStacker;
  if (name == "median") return CombinerKind::kMedian;
  if (name == "weighted") return CombinerKind::kWeighted;
  throw Error("unknown combiner '" + std::string(name) + "'");
}

std::vector<SparseVector> MetaFeatures::SparseRows() const {
  std::vector<SparseVector> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] != 0.0) pairs.emplace_back(static_cast<std::uint32_t>(k), row[k]);
    }
    out.push_back(SparseVector{std::move(pairs)});
  }
  return out;
}

namespace {

void CheckMembers(std::span<const MemberPtr> members) {
  if (members.empty()) throw Error("ensemble: no members");
  std::set<std::string> seen;
  for (const auto& m : members) {
    if (m->labels() != members.front()->labels()) {
      throw Error("ensemble: member '" + m->Describe() +
                  "' has a different class registry than '" +
                  members.front()->Describe() + "'");
    }
    if (!seen.insert(m->Describe()).second) {
      throw Error("ensemble: duplicate member feature spec '" +
                  m->Describe() + "'");
    }
  }
}

std::vector<double> MemberProba(const Classifier& member,
                                std::string_view text) {
  if (!member.Covers(text)) {
    LogWarning("member '" + member.Describe() +
               "' sees no tokens; using a uniform block");
    return std::vector<double>(member.num_classes(),
                               1.0 / static_cast<double>(member.num_classes()));
  }
  return member.PredictProba(text);
}

}  // namespace

MetaFeatures StackFeatures(std::span<const MemberPtr> members,
                           const Corpus& corpus) {
  CheckMembers(members);
  MetaFeatures meta;
  meta.members = members.size();
  meta.classes = members.front()->num_classes();
  meta.labels = LabelIndices(corpus, members.front()->labels());
  meta.rows.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) {
    std::vector<double> row;
    row.reserve(meta.dim());
    for (const auto& m : members) {
      const auto p = MemberProba(*m, s.text);
      row.insert(row.end(), p.begin(), p.end());
    }
    meta.rows.push_back(std::move(row));
  }
  return meta;
}

CrossValidation CrossValidate(const MetaFeatures& meta,
                              const LogRegConfig& config, std::size_t folds,
                              std::uint64_t fold_seed) {
  const std::size_t n = meta.rows.size();
  if (folds < 2) throw Error("stacker: need at least 2 folds");
  if (n < folds) {
    throw Error("stacker: " + std::to_string(n) + " rows cannot fill " +
                std::to_string(folds) + " folds");
  }
  const auto sparse = meta.SparseRows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(fold_seed);
  rng.Shuffle(&order);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t k = 0; k < n; ++k) fold_of[order[k]] = k % folds;

  CrossValidation cv;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<SparseVector> fit_rows;
    std::vector<int> fit_labels;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] != f) {
        fit_rows.push_back(sparse[i]);
        fit_labels.push_back(meta.labels[i]);
      }
    }
    const auto model = TrainLogReg(fit_rows, fit_labels, meta.classes,
                                   meta.dim(), config);
    std::size_t correct = 0;
    std::size_t total = 0;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] != f) continue;
      const auto p = LogRegProba(model, sparse[i]);
      const auto gold = static_cast<std::size_t>(meta.labels[i]);
      correct += ArgMax(p) == gold;
      loss -= std::log(std::max(p[gold], 1e-300));
      ++total;
    }
    cv.accuracy += static_cast<double>(correct) / static_cast<double>(total);
    cv.log_loss += loss / static_cast<double>(total);
  }
  cv.accuracy /= static_cast<double>(folds);
  cv.log_loss /= static_cast<double>(folds);
  return cv;
}

double CrossValidatedAccuracy(const MetaFeatures& meta,
                              const LogRegConfig& config, std::size_t folds,
                              std::uint64_t fold_seed) {
  return CrossValidate(meta, config, folds, fold_seed).accuracy;
}

LogRegModel TrainStacker(const MetaFeatures& meta, const StackerConfig& config,
                         StackerSelection* selection) {
  if (config.lambda_ladder.empty()) throw Error("stacker: empty lambda ladder");
  if (meta.rows.size() < config.folds) {
    throw Error("stacker: " + std::to_string(meta.rows.size()) +
                " rows is fewer than k = " + std::to_string(config.folds));
  }
  LogRegConfig lr;
  lr.epochs = config.epochs;
  lr.learning_rate = config.learning_rate;
  lr.batch_size = config.batch_size;
  lr.seed = Rng::Derive(config.seed, 11);

  StackerSelection sel;
  CrossValidation best{-1.0, 0.0};
  for (double lambda : config.lambda_ladder) {
    lr.lambda = lambda;
    const auto cv =
        CrossValidate(meta, lr, config.folds, Rng::Derive(config.seed, 12));
    sel.cv_accuracy.push_back(cv.accuracy);
    sel.cv_log_loss.push_back(cv.log_loss);
    const bool better =
        cv.accuracy > best.accuracy ||
        (cv.accuracy == best.accuracy &&
         (cv.log_loss < best.log_loss ||
          (cv.log_loss == best.log_loss && lambda > sel.lambda)));
    if (better) {
      best = cv;
      sel.lambda = lambda;
    }
  }
  lr.lambda = sel.lambda;
  auto model = TrainLogReg(meta.SparseRows(), meta.labels, meta.classes,
                           meta.dim(), lr);
  if (selection) *selection = std::move(sel);
  return model;
}

EnsembleClassifier::EnsembleClassifier(std::vector<MemberPtr> members,
                                       CombinerKind kind, LogRegModel meta,
                                       std::vector<double> weights)
    : Classifier(members.empty() ? std::vector<std::string>{}
                                 : members.front()->labels(),
                 members.empty() ? Registry::DslDefault()
                                 : members.front()->registry_ptr()),
      members_(std::move(members)),
      kind_(kind),
      meta_(std::move(meta)),
      weights_(std::move(weights)) {
  CheckMembers(members_);
  const std::size_t dim = members_.size() * num_classes();
  if (kind_ == CombinerKind::kStacker &&
      (meta_.num_classes != num_classes() || meta_.num_features != dim)) {
    throw Error("ensemble: meta model expects " +
                std::to_string(meta_.num_features) + " inputs, members give " +
                std::to_string(dim));
  }
  if (kind_ == CombinerKind::kWeighted) {
    if (weights_.size() != members_.size()) {
      throw Error("ensemble: need one weight per member");
    }
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw Error("ensemble: weights must be nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error("ensemble: weights must sum to 1");
    }
  }
}

std::vector<double> EnsembleClassifier::Combine(
    const std::vector<std::vector<double>>& member_probs) const {
  const std::size_t C = num_classes();
  const std::size_t M = members_.size();
  std::vector<double> out(C, 0.0);
  switch (kind_) {
    case CombinerKind::kStacker: {
      std::vector<std::pair<std::uint32_t, double>> pairs;
      for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t c = 0; c < C; ++c) {
          pairs.emplace_back(static_cast<std::uint32_t>(m * C + c),
                             member_probs[m][c]);
        }
      }
      return LogRegProba(meta_, SparseVector::FromPairs(std::move(pairs)));
    }
    case CombinerKind::kMedian: {
      std::vector<double> column(M);
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t m = 0; m < M; ++m) column[m] = member_probs[m][c];
        std::sort(column.begin(), column.end());
        out[c] = M % 2 ? column[M / 2]
                       : 0.5 * (column[M / 2 - 1] + column[M / 2]);
      }
      break;
    }
    case CombinerKind::kWeighted:
      for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t c = 0; c < C; ++c) {
          out[c] += weights_[m] * member_probs[m][c];
        }
      }
      break;
  }
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  if (!(sum > 0.0)) return std::vector<double>(C, 1.0 / static_cast<double>(C));
  for (double& v : out) v /= sum;
  return out;
}

EnsemblePrediction EnsembleClassifier::PredictDetailed(
    std::string_view text) const {
  EnsemblePrediction pred;
  pred.member_probs.reserve(members_.size());
  for (const auto& m : members_) {
    pred.member_probs.push_back(MemberProba(*m, text));
  }
  pred.probs = Combine(pred.member_probs);
  pred.label = labels()[ArgMax(pred.probs)];
  return pred;
}

std::vector<double> EnsembleClassifier::PredictProba(
    std::string_view text) const {
  return PredictDetailed(text).probs;
}

bool EnsembleClassifier::Covers(std::string_view text) const {
  return std::any_of(members_.begin(), members_.end(),
                     [&](const MemberPtr& m) { return m->Covers(text); });
}

std::string EnsembleClassifier::Describe() const {
  std::string s = "ensemble(" + std::string(CombinerName(kind_));
  for (const auto& m : members_) s += "; " + m->Describe();
  return s + ")";
}

std::vector<NgramSpec> DefaultRoster() {
  return {
      {Unit::kChar, 2, 2, BoundaryMode::kRestricted},
      {Unit::kChar, 3, 3, BoundaryMode::kRestricted},
      {Unit::kChar, 4, 4, BoundaryMode::kRestricted},
      {Unit::kChar, 5, 5, BoundaryMode::kRestricted},
      {Unit::kWord, 1, 1, BoundaryMode::kRestricted},
  };
}

EnsembleClassifier TrainEnsemble(const Corpus& train,
                                 const EnsembleOptions& options,
                                 EnsembleTrainReport* report) {
  if (options.roster.empty() && !options.include_mnb &&
      !options.include_logreg) {
    throw Error("ensemble: empty member roster");
  }
  auto [fit, held_out] = Split(train, options.split);
  if (held_out.empty()) throw Error("ensemble: held-out split is empty");

  EnsembleTrainReport rep;
  std::vector<MemberPtr> members;
  auto held_out_accuracy = [&](const Classifier& m) {
    std::size_t correct = 0;
    for (const auto& s : held_out.sentences()) {
      correct += m.Predict(s.text) == s.label;
    }
    return static_cast<double>(correct) /
           static_cast<double>(held_out.size());
  };
  for (std::size_t k = 0; k < options.roster.size(); ++k) {
    TrainConfig config = options.gru;
    config.seed = Rng::Derive(options.gru.seed, 100 + k);
    auto member = std::make_shared<GruClassifier>(
        TrainGru(fit, held_out, options.roster[k], config));
    rep.member_valid_accuracy.push_back(
        member->history().back().valid_accuracy);
    members.push_back(std::move(member));
  }
  if (options.include_mnb) {
    auto m = std::make_shared<MnbClassifier>(
        TrainMnbClassifier(fit, DefaultLinearSpec(), options.mnb));
    rep.member_valid_accuracy.push_back(held_out_accuracy(*m));
    members.push_back(std::move(m));
  }
  if (options.include_logreg) {
    auto m = std::make_shared<LogRegClassifier>(
        TrainLogRegClassifier(fit, DefaultLinearSpec(), options.logreg));
    rep.member_valid_accuracy.push_back(held_out_accuracy(*m));
    members.push_back(std::move(m));
  }

  LogRegModel meta;
  if (options.combiner == CombinerKind::kStacker) {
    const auto features = StackFeatures(members, held_out);
    meta = TrainStacker(features, options.stacker, &rep.selection);
  }
  if (report) *report = std::move(rep);
  return EnsembleClassifier(std::move(members), options.combiner,
                            std::move(meta), options.weights);
}

}  // namespace lide
