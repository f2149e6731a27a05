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

#include "lide/rnn.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include "lide/error.h"
#include "lide/random.h"

namespace lide {
namespace {

Vector Sigmoid(const Vector& a) {
  return a.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

Vector SoftmaxVec(const Vector& logits) {
  const double m = logits.maxCoeff();
  Vector p = (logits.array() - m).exp().matrix();
  return p / p.sum();
}

template <typename P, typename B>
std::vector<B> CollectBlocks(P& p) {
  return {
      {"embedding", {p.embedding.data(), std::size_t(p.embedding.size())}},
      {"w_update", {p.w_update.data(), std::size_t(p.w_update.size())}},
      {"u_update", {p.u_update.data(), std::size_t(p.u_update.size())}},
      {"b_update", {p.b_update.data(), std::size_t(p.b_update.size())}},
      {"w_reset", {p.w_reset.data(), std::size_t(p.w_reset.size())}},
      {"u_reset", {p.u_reset.data(), std::size_t(p.u_reset.size())}},
      {"b_reset", {p.b_reset.data(), std::size_t(p.b_reset.size())}},
      {"w_cand", {p.w_cand.data(), std::size_t(p.w_cand.size())}},
      {"u_cand", {p.u_cand.data(), std::size_t(p.u_cand.size())}},
      {"b_cand", {p.b_cand.data(), std::size_t(p.b_cand.size())}},
      {"w_out", {p.w_out.data(), std::size_t(p.w_out.size())}},
      {"b_out", {p.b_out.data(), std::size_t(p.b_out.size())}},
  };
}

double Accuracy(const GruParams& params,
                const std::vector<std::vector<std::uint32_t>>& seqs,
                const std::vector<int>& labels, Pooling pooling) {
  if (seqs.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    std::size_t pred = 0;
    if (!seqs[i].empty()) {
      const auto cache = GruForward(params, seqs[i], pooling);
      pred = ArgMax({cache.probs.data(), std::size_t(cache.probs.size())});
    }
    correct += pred == static_cast<std::size_t>(labels[i]);
  }
  return static_cast<double>(correct) / static_cast<double>(seqs.size());
}

// Adam moments laid out like the parameters.
struct AdamState {
  GruParams m;
  GruParams v;
  long step = 0;
};

void AdamUpdate(const TrainConfig& config, const GruParams& grads,
                GruParams* params, AdamState* state) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  ++state->step;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(state->step));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(state->step));
  auto p = params->Blocks();
  auto g = grads.Blocks();
  auto m = state->m.Blocks();
  auto v = state->v.Blocks();
  for (std::size_t b = 0; b < p.size(); ++b) {
    for (std::size_t k = 0; k < p[b].values.size(); ++k) {
      const double gk = g[b].values[k];
      double& mk = m[b].values[k];
      double& vk = v[b].values[k];
      mk = kBeta1 * mk + (1.0 - kBeta1) * gk;
      vk = kBeta2 * vk + (1.0 - kBeta2) * gk * gk;
      p[b].values[k] -=
          config.learning_rate * (mk / c1) / (std::sqrt(vk / c2) + kEps);
    }
  }
}

}  // namespace

GruParams GruParams::Zeros(std::size_t vocab_size, std::size_t embed_dim,
                           std::size_t hidden, std::size_t num_classes) {
  const auto V = static_cast<Eigen::Index>(vocab_size);
  const auto d = static_cast<Eigen::Index>(embed_dim);
  const auto H = static_cast<Eigen::Index>(hidden);
  const auto C = static_cast<Eigen::Index>(num_classes);
  GruParams p;
  p.embedding = Matrix::Zero(V, d);
  p.w_update = Matrix::Zero(H, d);
  p.u_update = Matrix::Zero(H, H);
  p.b_update = Vector::Zero(H);
  p.w_reset = Matrix::Zero(H, d);
  p.u_reset = Matrix::Zero(H, H);
  p.b_reset = Vector::Zero(H);
  p.w_cand = Matrix::Zero(H, d);
  p.u_cand = Matrix::Zero(H, H);
  p.b_cand = Vector::Zero(H);
  p.w_out = Matrix::Zero(C, H);
  p.b_out = Vector::Zero(C);
  return p;
}

std::vector<ParamBlock> GruParams::Blocks() {
  return CollectBlocks<GruParams, ParamBlock>(*this);
}

std::vector<ConstParamBlock> GruParams::Blocks() const {
  return CollectBlocks<const GruParams, ConstParamBlock>(*this);
}

void GruParams::CheckShapes() const {
  const auto d = embedding.cols();
  const auto H = u_update.rows();
  const auto C = w_out.rows();
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("gru: inconsistent shape of ") + what);
  };
  need(embedding.rows() >= 1 && d >= 1, "embedding");
  need(H >= 1 && C >= 1, "hidden/output");
  for (const Matrix* w : {&w_update, &w_reset, &w_cand}) {
    need(w->rows() == H && w->cols() == d, "input weights");
  }
  for (const Matrix* u : {&u_update, &u_reset, &u_cand}) {
    need(u->rows() == H && u->cols() == H, "recurrent weights");
  }
  for (const Vector* b : {&b_update, &b_reset, &b_cand}) {
    need(b->size() == H, "gate biases");
  }
  need(w_out.cols() == H && b_out.size() == C, "output layer");
}

bool GruParams::AllFinite() const {
  for (const auto& b : Blocks()) {
    for (double x : b.values) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

void GruParams::SetZero() {
  for (auto& b : Blocks()) std::fill(b.values.begin(), b.values.end(), 0.0);
}

GruCache GruForward(const GruParams& params,
                    std::span<const std::uint32_t> ids, Pooling pooling,
                    const Vector* dropout_mask, double dropout_p) {
  if (ids.empty()) throw Error("gru: empty input sequence");
  const auto H = static_cast<Eigen::Index>(params.hidden());
  GruCache cache;
  cache.ids.assign(ids.begin(), ids.end());
  cache.pooling = pooling;
  const std::size_t T = ids.size();
  cache.h.reserve(T + 1);
  cache.z.reserve(T);
  cache.r.reserve(T);
  cache.c.reserve(T);
  cache.h.push_back(Vector::Zero(H));
  Vector sum = Vector::Zero(H);
  for (std::size_t t = 0; t < T; ++t) {
    if (ids[t] >= params.vocab_size()) {
      throw Error("gru: token id " + std::to_string(ids[t]) +
                  " outside vocabulary");
    }
    const Vector e = params.embedding.row(ids[t]).transpose();
    const Vector& h_prev = cache.h.back();
    Vector z = Sigmoid(params.w_update * e + params.u_update * h_prev +
                       params.b_update);
    Vector r = Sigmoid(params.w_reset * e + params.u_reset * h_prev +
                       params.b_reset);
    Vector c = (params.w_cand * e +
                params.u_cand * r.cwiseProduct(h_prev) + params.b_cand)
                   .array()
                   .tanh()
                   .matrix();
    Vector h = (1.0 - z.array()).matrix().cwiseProduct(h_prev) +
               z.cwiseProduct(c);
    sum += h;
    cache.z.push_back(std::move(z));
    cache.r.push_back(std::move(r));
    cache.c.push_back(std::move(c));
    cache.h.push_back(std::move(h));
  }
  cache.pooled = pooling == Pooling::kMean
                     ? Vector(sum / static_cast<double>(T))
                     : cache.h.back();
  if (dropout_mask != nullptr) {
    if (dropout_mask->size() != H) throw Error("gru: dropout mask size");
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
      throw Error("gru: dropout must lie in [0, 1)");
    }
    cache.dropout_mask = *dropout_mask;
    cache.dropout_p = dropout_p;
    cache.features =
        cache.pooled.cwiseProduct(*dropout_mask) / (1.0 - dropout_p);
  } else {
    cache.features = cache.pooled;
  }
  cache.probs = SoftmaxVec(params.w_out * cache.features + params.b_out);
  return cache;
}

void GruBackwardAccumulate(const GruParams& params, const GruCache& cache,
                           int gold, GruParams* grads) {
  const std::size_t T = cache.ids.size();
  Vector dlogits = cache.probs;
  dlogits(gold) -= 1.0;
  grads->w_out.noalias() += dlogits * cache.features.transpose();
  grads->b_out += dlogits;

  Vector dpooled = params.w_out.transpose() * dlogits;
  if (cache.dropout_mask.size() > 0) {
    dpooled = dpooled.cwiseProduct(cache.dropout_mask) /
              (1.0 - cache.dropout_p);
  }
  const bool mean = cache.pooling == Pooling::kMean;
  const Vector direct_mean = dpooled / static_cast<double>(T);

  Vector dh_next = Vector::Zero(dpooled.size());
  for (std::size_t t = T; t-- > 0;) {
    Vector dh = dh_next;
    if (mean) {
      dh += direct_mean;
    } else if (t == T - 1) {
      dh += dpooled;
    }
    const Vector& h_prev = cache.h[t];
    const Vector& z = cache.z[t];
    const Vector& r = cache.r[t];
    const Vector& c = cache.c[t];
    const auto e = params.embedding.row(cache.ids[t]).transpose();

    const Vector dz = dh.cwiseProduct(c - h_prev);
    const Vector dc = dh.cwiseProduct(z);
    Vector dh_prev = dh.cwiseProduct((1.0 - z.array()).matrix());

    const Vector da_c =
        dc.cwiseProduct((1.0 - c.array().square()).matrix());
    const Vector rh = r.cwiseProduct(h_prev);
    grads->w_cand.noalias() += da_c * e.transpose();
    grads->u_cand.noalias() += da_c * rh.transpose();
    grads->b_cand += da_c;
    const Vector drh = params.u_cand.transpose() * da_c;
    const Vector dr = drh.cwiseProduct(h_prev);
    dh_prev += drh.cwiseProduct(r);

    const Vector da_z =
        dz.cwiseProduct(z.cwiseProduct((1.0 - z.array()).matrix()));
    grads->w_update.noalias() += da_z * e.transpose();
    grads->u_update.noalias() += da_z * h_prev.transpose();
    grads->b_update += da_z;
    dh_prev.noalias() += params.u_update.transpose() * da_z;

    const Vector da_r =
        dr.cwiseProduct(r.cwiseProduct((1.0 - r.array()).matrix()));
    grads->w_reset.noalias() += da_r * e.transpose();
    grads->u_reset.noalias() += da_r * h_prev.transpose();
    grads->b_reset += da_r;
    dh_prev.noalias() += params.u_reset.transpose() * da_r;

    const Vector de = params.w_update.transpose() * da_z +
                      params.w_reset.transpose() * da_r +
                      params.w_cand.transpose() * da_c;
    grads->embedding.row(cache.ids[t]) += de.transpose();
    dh_next = std::move(dh_prev);
  }
}

GruParams GruBackward(const GruParams& params, const GruCache& cache,
                      int gold) {
  GruParams grads =
      GruParams::Zeros(params.vocab_size(), params.embed_dim(),
                       params.hidden(), params.num_classes());
  GruBackwardAccumulate(params, cache, gold, &grads);
  return grads;
}

double GruLoss(const GruParams& params, std::span<const std::uint32_t> ids,
               int gold, Pooling pooling, const Vector* dropout_mask,
               double dropout_p) {
  const auto cache =
      GruForward(params, ids, pooling, dropout_mask, dropout_p);
  return -std::log(cache.probs(gold));
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw Error("gru: epochs must be >= 1");
  if (hidden < 1) throw Error("gru: hidden size must be >= 1");
  if (embed_dim < 1) throw Error("gru: embedding dim must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw Error("gru: dropout must lie in [0, 1)");
  }
  if (!(learning_rate > 0.0)) throw Error("gru: learning rate must be > 0");
  if (batch_size < 1) throw Error("gru: batch size must be >= 1");
  if (max_len < 1) throw Error("gru: max_len must be >= 1");
  if (clip_norm < 0.0) throw Error("gru: clip norm must be >= 0");
  if (min_count < 1) throw Error("gru: min_count must be >= 1");
}

TrainConfig PaperScaleConfig() {
  TrainConfig c;
  c.hidden = 768;
  c.dropout = 0.45;
  c.epochs = 20;
  return c;
}

GruParams InitGruParams(std::size_t vocab_size, std::size_t num_classes,
                        const TrainConfig& config) {
  GruParams p = GruParams::Zeros(vocab_size, config.embed_dim, config.hidden,
                                 num_classes);
  Rng rng(Rng::Derive(config.seed, 1));
  for (auto& block : p.Blocks()) {
    if (block.name.starts_with("b_")) continue;
    for (double& x : block.values) {
      x = rng.Uniform(-config.init_scale, config.init_scale);
    }
  }
  return p;
}

GruClassifier::GruClassifier(std::vector<std::string> labels,
                             std::shared_ptr<const Registry> registry,
                             NgramSpec spec, Vocabulary vocab,
                             GruParams params, TrainConfig config,
                             std::vector<EpochStats> history)
    : Classifier(std::move(labels), std::move(registry)),
      spec_(spec),
      vocab_(std::move(vocab)),
      params_(std::move(params)),
      config_(config),
      history_(std::move(history)) {
  params_.CheckShapes();
  if (spec_.n_min != spec_.n_max) {
    throw Error("gru: feature spec must name a single n-gram order");
  }
  if (params_.num_classes() != num_classes() ||
      params_.vocab_size() != vocab_.size()) {
    throw Error("gru: parameter shapes do not match labels/vocabulary");
  }
}

std::vector<std::uint32_t> GruClassifier::Encode(
    std::string_view text) const {
  const auto tokens = NgramsUpTo(text, spec_);
  if (tokens.empty()) return {};
  return EncodeSequence(tokens, vocab_, config_.max_len);
}

std::vector<double> GruClassifier::PredictProba(std::string_view text) const {
  const auto ids = Encode(text);
  if (ids.empty()) {
    return std::vector<double>(num_classes(),
                               1.0 / static_cast<double>(num_classes()));
  }
  const auto cache = GruForward(params_, ids, config_.pooling);
  return {cache.probs.data(), cache.probs.data() + cache.probs.size()};
}

std::string GruClassifier::Describe() const {
  return "gru " + spec_.ToString();
}

GruClassifier TrainGru(const Corpus& train, const Corpus& valid,
                       const NgramSpec& spec, const TrainConfig& config,
                       const GruEpochCallback& on_epoch) {
  config.Validate();
  spec.Validate();
  if (spec.n_min != spec.n_max) {
    throw Error("gru: feature spec must name a single n-gram order, got " +
                spec.ToString());
  }
  if (train.empty()) throw Error("gru: training corpus is empty");
  if (valid.empty()) throw Error("gru: validation corpus is empty");

  auto labels = DistinctLabels(train);
  const auto train_y = LabelIndices(train, labels);
  const auto valid_y = LabelIndices(valid, labels);

  VocabBuilder builder;
  std::vector<std::vector<std::string>> train_tokens;
  train_tokens.reserve(train.size());
  for (const auto& s : train.sentences()) {
    train_tokens.push_back(NgramsUpTo(s.text, spec));
    builder.Add(train_tokens.back());
  }
  Vocabulary vocab = builder.Build(config.min_count, config.max_vocab);

  auto encode = [&](const std::vector<std::string>& tokens) {
    return tokens.empty() ? std::vector<std::uint32_t>{}
                          : EncodeSequence(tokens, vocab, config.max_len);
  };
  std::vector<std::vector<std::uint32_t>> train_seqs;
  train_seqs.reserve(train.size());
  for (const auto& t : train_tokens) train_seqs.push_back(encode(t));
  train_tokens.clear();
  std::vector<std::vector<std::uint32_t>> valid_seqs;
  valid_seqs.reserve(valid.size());
  for (const auto& s : valid.sentences()) {
    valid_seqs.push_back(encode(NgramsUpTo(s.text, spec)));
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < train_seqs.size(); ++i) {
    if (!train_seqs[i].empty()) order.push_back(i);
  }
  if (order.empty()) {
    throw Error("gru: no training sentence yields " + spec.ToString() +
                " tokens");
  }

  const std::size_t C = labels.size();
  GruParams params = InitGruParams(vocab.size(), C, config);
  GruParams grads = GruParams::Zeros(vocab.size(), config.embed_dim,
                                     config.hidden, C);
  AdamState adam{grads, grads, 0};
  Rng shuffle_rng(Rng::Derive(config.seed, 2));
  Rng dropout_rng(Rng::Derive(config.seed, 3));
  const double keep = 1.0 - config.dropout;
  Vector mask(config.hidden);

  std::vector<EpochStats> history;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.Shuffle(&order);
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      grads.SetZero();
      double loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        const Vector* mask_ptr = nullptr;
        if (config.dropout > 0.0) {
          for (Eigen::Index u = 0; u < mask.size(); ++u) {
            mask(u) = dropout_rng.Bernoulli(keep) ? 1.0 : 0.0;
          }
          mask_ptr = &mask;
        }
        const auto cache = GruForward(params, train_seqs[i], config.pooling,
                                      mask_ptr, config.dropout);
        loss -= std::log(cache.probs(train_y[i]));
        GruBackwardAccumulate(params, cache, train_y[i], &grads);
      }
      if (!std::isfinite(loss)) {
        throw Error("gru: non-finite loss at epoch " + std::to_string(epoch) +
                    ", batch " + std::to_string(batch_index));
      }
      const double inv_b = 1.0 / static_cast<double>(end - start);
      double norm2 = 0.0;
      for (auto& b : grads.Blocks()) {
        for (double& g : b.values) {
          g *= inv_b;
          norm2 += g * g;
        }
      }
      if (config.clip_norm > 0.0 && std::sqrt(norm2) > config.clip_norm) {
        const double s = config.clip_norm / std::sqrt(norm2);
        for (auto& b : grads.Blocks()) {
          for (double& g : b.values) g *= s;
        }
      }
      AdamUpdate(config, grads, &params, &adam);
    }
    if (!params.AllFinite()) {
      throw Error("gru: non-finite parameters after epoch " +
                  std::to_string(epoch));
    }
    EpochStats stats{epoch, Accuracy(params, train_seqs, train_y, config.pooling),
                     Accuracy(params, valid_seqs, valid_y, config.pooling)};
    history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return GruClassifier(std::move(labels), train.registry_ptr(), spec,
                       std::move(vocab), std::move(params), config,
                       std::move(history));
}

void WriteHistoryCsv(const std::vector<EpochStats>& history,
                     std::ostream& out) {
  out << "epoch,train_acc,valid_acc\n";
  for (const auto& h : history) {
    out << h.epoch << ',' << h.train_accuracy << ',' << h.valid_accuracy
        << '\n';
  }
}

bool BetterTrial(const SearchTrial& a, const SearchTrial& b) {
  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
  if (a.config.hidden != b.config.hidden) {
    return a.config.hidden < b.config.hidden;
  }
  if (a.config.dropout != b.config.dropout) {
    return a.config.dropout > b.config.dropout;
  }
  return a.config.epochs < b.config.epochs;
}

SearchReport TwoStageSearch(const TrainConfig& base, const SearchGrids& grids,
                            const ConfigEvaluator& evaluate) {
  if (grids.epochs.empty() || grids.hidden.empty() || grids.dropout.empty()) {
    throw Error("grid search: every grid axis needs at least one value");
  }
  if (grids.top_k < 1) throw Error("grid search: top_k must be >= 1");

  SearchReport report;
  std::map<std::tuple<int, int, double>, double> memo;
  auto run = [&](int stage, const TrainConfig& config) {
    const auto key =
        std::make_tuple(config.epochs, config.hidden, config.dropout);
    auto it = memo.find(key);
    const double acc =
        it != memo.end() ? it->second : memo[key] = evaluate(config);
    report.trials.push_back({stage, config, acc});
    return SearchTrial{stage, config, acc};
  };

  // Stage 1: one axis at a time.
  auto sweep = [&](auto values, auto set) {
    std::vector<SearchTrial> trials;
    for (const auto& v : values) {
      TrainConfig c = base;
      set(c, v);
      trials.push_back(run(1, c));
    }
    std::stable_sort(trials.begin(), trials.end(), BetterTrial);
    trials.resize(std::min(trials.size(), grids.top_k));
    return trials;
  };
  std::vector<int> top_epochs;
  for (const auto& t : sweep(grids.epochs,
                             [](TrainConfig& c, int v) { c.epochs = v; })) {
    top_epochs.push_back(t.config.epochs);
  }
  std::vector<int> top_hidden;
  for (const auto& t : sweep(grids.hidden,
                             [](TrainConfig& c, int v) { c.hidden = v; })) {
    top_hidden.push_back(t.config.hidden);
  }
  std::vector<double> top_dropout;
  for (const auto& t : sweep(grids.dropout, [](TrainConfig& c, double v) {
         c.dropout = v;
       })) {
    top_dropout.push_back(t.config.dropout);
  }

  // Stage 2: full grid over the survivors.
  std::optional<SearchTrial> best;
  for (int e : top_epochs) {
    for (int h : top_hidden) {
      for (double p : top_dropout) {
        TrainConfig c = base;
        c.epochs = e;
        c.hidden = h;
        c.dropout = p;
        auto trial = run(2, c);
        if (!best || BetterTrial(trial, *best)) best = trial;
      }
    }
  }
  report.best = best->config;
  report.best_accuracy = best->accuracy;
  return report;
}

SearchReport TwoStageSearch(const Corpus& devel, const NgramSpec& spec,
                            const TrainConfig& base, const SearchGrids& grids,
                            std::uint64_t split_seed) {
  auto [fit, held_out] = Split(devel, SplitSpec{0.75, split_seed, true});
  return TwoStageSearch(base, grids, [&](const TrainConfig& c) {
    const auto model = TrainGru(fit, held_out, spec, c);
    return model.history().back().valid_accuracy;
  });
}

void WriteSearchCsv(const SearchReport& report, std::ostream& out) {
  out << "stage,epochs,hidden,dropout,valid_acc\n";
  for (const auto& t : report.trials) {
    out << t.stage << ',' << t.config.epochs << ',' << t.config.hidden << ','
        << t.config.dropout << ',' << t.accuracy << '\n';
  }
}

}  // namespace lide
