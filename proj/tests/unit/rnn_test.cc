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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "lide/error.h"
#include "lide/eval.h"
#include "lide/random.h"
#include "lide/rnn.h"
#include "oracles.h"
#include "synthetic.h"

namespace lide {
namespace {

using Ids = std::vector<std::uint32_t>;

TEST(GruForwardTest, ZeroParamsGiveUniformOutput) {
  const auto p = GruParams::Zeros(5, 3, 4, 4);
  const Ids ids = {1, 2, 3, 0};
  for (auto pooling : {Pooling::kMean, Pooling::kLast}) {
    const auto cache = GruForward(p, ids, pooling);
    EXPECT_TRUE(cache.h.back().isZero());
    for (int c = 0; c < 4; ++c) EXPECT_DOUBLE_EQ(cache.probs[c], 0.25);
  }
}

TEST(GruForwardTest, SeveredRecurrenceOnRepeatedToken) {
  Rng rng(1);
  auto p = testing::RandomGruParams(6, 4, 5, 3, 0.5, &rng);
  p.u_update.setZero();
  p.u_reset.setZero();
  p.u_cand.setZero();
  // With U = 0 the state still mixes h_{t-1} through the update gate, so
  // h_t = (1 - z^t) c for a constant token; the mean pooled output therefore
  // depends on length only through that closed form.
  const auto one = GruForward(p, Ids{2});
  const auto many = GruForward(p, Ids{2, 2, 2, 2, 2});
  const Vector z = one.z[0];
  const Vector c = one.c[0];
  Vector mean = Vector::Zero(5);
  for (int t = 1; t <= 5; ++t) {
    mean += (Vector::Ones(5) - (Vector::Ones(5) - z).array().pow(t).matrix())
                .cwiseProduct(c);
  }
  mean /= 5.0;
  EXPECT_LT((many.pooled - mean).norm(), 1e-12);
  // With the update gate saturated open every state equals h_1 exactly.
  p.b_update.setConstant(50.0);
  const auto a = GruForward(p, Ids{3});
  const auto b = GruForward(p, Ids{3, 3, 3, 3});
  EXPECT_LT((a.probs - b.probs).norm(), 1e-12);
}

TEST(GruForwardTest, PropertyProbabilitiesAndGateBounds) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::RandomGruParams(10, 4, 6, 3, 2.0, &rng);
    Ids ids(1 + rng.Below(15));
    for (auto& id : ids) id = static_cast<std::uint32_t>(rng.Below(10));
    const auto cache = GruForward(p, ids);
    EXPECT_NEAR(cache.probs.sum(), 1.0, 1e-9);
    for (std::size_t t = 0; t < ids.size(); ++t) {
      EXPECT_TRUE((cache.z[t].array() > 0).all() &&
                  (cache.z[t].array() < 1).all());
      EXPECT_TRUE((cache.r[t].array() > 0).all() &&
                  (cache.r[t].array() < 1).all());
      EXPECT_TRUE((cache.c[t].array().abs() < 1).all());
      EXPECT_TRUE((cache.h[t + 1].array().abs() < 1).all());
    }
  }
}

TEST(GruForwardTest, MeanPoolingIsOrderInvariantWithoutRecurrence) {
  Rng rng(3);
  auto p = testing::RandomGruParams(8, 4, 5, 3, 0.5, &rng);
  p.u_update.setZero();
  p.u_reset.setZero();
  p.u_cand.setZero();
  p.b_update.setConstant(50.0);  // h_t = c_t
  const auto a = GruForward(p, Ids{1, 4, 7, 2});
  const auto b = GruForward(p, Ids{7, 2, 4, 1});
  EXPECT_LT((a.probs - b.probs).norm(), 1e-12);
}

TEST(GruForwardTest, RejectsBadInput) {
  const auto p = GruParams::Zeros(5, 3, 4, 2);
  EXPECT_THROW(GruForward(p, Ids{}), Error);
  EXPECT_THROW(GruForward(p, Ids{5}), Error);
}

TEST(GruBackwardTest, MatchesFiniteDifferences) {
  Rng rng(4);
  const auto p = testing::RandomGruParams(20, 8, 8, 4, 0.5, &rng);
  Ids ids(12);
  for (auto& id : ids) id = static_cast<std::uint32_t>(rng.Below(20));
  for (auto pooling : {Pooling::kMean, Pooling::kLast}) {
    const auto r = testing::GruGradientCheck(p, ids, 2, pooling, nullptr, 0.0,
                                             1e-5);
    EXPECT_LT(r.max_relative_error, 1e-4);
    EXPECT_EQ(r.entries, 20u * 8 + 3 * (8 * 8 + 8 * 8 + 8) + 4 * 8 + 4);
  }
}

TEST(GruBackwardTest, MatchesFiniteDifferencesWithDropoutMask) {
  Rng rng(5);
  const auto p = testing::RandomGruParams(10, 4, 6, 3, 0.5, &rng);
  Vector mask(6);
  mask << 1, 0, 1, 1, 0, 1;
  const auto r = testing::GruGradientCheck(p, Ids{1, 2, 3, 4, 5}, 1,
                                           Pooling::kMean, &mask, 0.3, 1e-5);
  EXPECT_LT(r.max_relative_error, 1e-4);
}

TEST(GruBackwardTest, UntouchedEmbeddingRowsHaveZeroGradient) {
  Rng rng(6);
  const auto p = testing::RandomGruParams(10, 4, 5, 3, 0.5, &rng);
  const Ids ids = {2, 5, 2};
  const auto g = GruBackward(p, GruForward(p, ids), 0);
  for (int row = 0; row < 10; ++row) {
    const bool used = row == 2 || row == 5;
    EXPECT_EQ(g.embedding.row(row).isZero(), !used) << row;
  }
}

TEST(GruBackwardTest, CertainGoldGivesZeroOutputGradient) {
  Rng rng(7);
  auto p = testing::RandomGruParams(6, 3, 4, 3, 0.5, &rng);
  p.w_out.setZero();
  p.b_out << 0.0, 800.0, 0.0;  // p(gold = 1) == 1 in double precision
  const auto g = GruBackward(p, GruForward(p, Ids{1, 2}), 1);
  EXPECT_TRUE(g.w_out.isZero());
  EXPECT_TRUE(g.b_out.isZero());
}

TEST(TrainConfigTest, ValidateAndPaperScale) {
  TrainConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.dropout = 1.0;
  EXPECT_THROW(c.Validate(), Error);
  c = TrainConfig{};
  c.hidden = 0;
  EXPECT_THROW(c.Validate(), Error);
  const auto paper = PaperScaleConfig();
  EXPECT_EQ(paper.hidden, 768);
  EXPECT_DOUBLE_EQ(paper.dropout, 0.45);
  EXPECT_EQ(paper.epochs, 20);
}

class GruTrainingTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto langs = testing::DisjointAlphabetLanguages(21);
    train_ = testing::MakeCorpus(langs, 60, 22);
    valid_ = testing::MakeCorpus(langs, 20, 23);
    config_.hidden = 16;
    config_.embed_dim = 16;
    config_.epochs = 10;
    config_.seed = 5;
  }
  Corpus train_, valid_;
  TrainConfig config_;
  NgramSpec spec_{Unit::kChar, 2, 2, BoundaryMode::kRestricted};
};

TEST_F(GruTrainingTest, SeparableCorpusIsLearned) {
  std::vector<EpochStats> seen;
  const auto m = TrainGru(train_, valid_, spec_, config_,
                          [&](const EpochStats& s) { seen.push_back(s); });
  ASSERT_EQ(m.history().size(), 10u);
  EXPECT_EQ(seen, m.history());
  EXPECT_GE(m.history().back().valid_accuracy, 0.99);
  EXPECT_EQ(Accuracy(PredictAll(m, valid_), Golds(valid_)),
            m.history().back().valid_accuracy);
  std::ostringstream csv;
  WriteHistoryCsv(m.history(), csv);
  EXPECT_EQ(csv.str().substr(0, 25), "epoch,train_acc,valid_acc");
}

TEST_F(GruTrainingTest, SameSeedGivesBitIdenticalParameters) {
  config_.epochs = 2;
  const auto a = TrainGru(train_, valid_, spec_, config_);
  const auto b = TrainGru(train_, valid_, spec_, config_);
  const auto ba = a.params().Blocks();
  const auto bb = b.params().Blocks();
  for (std::size_t k = 0; k < ba.size(); ++k) {
    EXPECT_TRUE(std::equal(ba[k].values.begin(), ba[k].values.end(),
                           bb[k].values.begin()));
  }
}

TEST_F(GruTrainingTest, DropoutChangesTheTrajectory) {
  config_.epochs = 1;
  config_.dropout = 0.0;
  const auto a = TrainGru(train_, valid_, spec_, config_);
  config_.dropout = 0.3;
  const auto b = TrainGru(train_, valid_, spec_, config_);
  EXPECT_FALSE(a.params().w_out.isApprox(b.params().w_out));
}

TEST_F(GruTrainingTest, RequiresSingleOrderAndHandlesEmptyText) {
  EXPECT_THROW(TrainGru(train_, valid_, {Unit::kChar, 1, 2,
                                         BoundaryMode::kRestricted},
                        config_),
               Error);
  config_.epochs = 1;
  const auto m = TrainGru(train_, valid_, spec_, config_);
  EXPECT_FALSE(m.Covers("a b c"));  // no word reaches length 2
  EXPECT_TRUE(m.Encode("   ").empty());
  for (double p : m.PredictProba("a b")) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
  EXPECT_EQ(m.Describe(), "gru char:2-2:restricted");
}

SearchTrial Trial(int epochs, int hidden, double dropout, double acc) {
  SearchTrial t;
  t.config.epochs = epochs;
  t.config.hidden = hidden;
  t.config.dropout = dropout;
  t.accuracy = acc;
  return t;
}

TEST(SearchTest, TiePrefersSmallerNetworkWithMoreDropout) {
  EXPECT_TRUE(BetterTrial(Trial(20, 768, 0.45, 0.9), Trial(20, 1280, 0.4, 0.9)));
  EXPECT_FALSE(BetterTrial(Trial(20, 1280, 0.4, 0.9), Trial(20, 768, 0.45, 0.9)));
  EXPECT_TRUE(BetterTrial(Trial(20, 1280, 0.4, 0.91), Trial(20, 768, 0.45, 0.9)));
  EXPECT_TRUE(BetterTrial(Trial(10, 64, 0.4, 0.9), Trial(20, 64, 0.4, 0.9)));
}

TEST(SearchTest, SingletonGridsReturnThatConfig) {
  TrainConfig base;
  int calls = 0;
  const auto report = TwoStageSearch(base, {{7}, {33}, {0.3}, 2},
                                     [&](const TrainConfig&) {
                                       ++calls;
                                       return 0.5;
                                     });
  EXPECT_EQ(report.best.epochs, 7);
  EXPECT_EQ(report.best.hidden, 33);
  EXPECT_DOUBLE_EQ(report.best.dropout, 0.3);
  EXPECT_EQ(calls, 4);  // three stage-1 probes, one new grid point
}

TEST(SearchTest, PaperTieResolvesTo768And045) {
  TrainConfig base;
  base.epochs = 20;
  base.hidden = 768;
  base.dropout = 0.45;
  auto score = [](const TrainConfig& c) {
    if ((c.hidden == 1280 && c.dropout == 0.4) ||
        (c.hidden == 768 && c.dropout == 0.45)) {
      return 0.95;
    }
    if (c.hidden == 1280 || c.dropout == 0.4) return 0.93;
    return 0.9;
  };
  const auto report = TwoStageSearch(
      base, {{20}, {256, 512, 768, 1280}, {0.2, 0.4, 0.45, 0.6}, 2}, score);
  EXPECT_EQ(report.best.hidden, 768);
  EXPECT_DOUBLE_EQ(report.best.dropout, 0.45);
  EXPECT_DOUBLE_EQ(report.best_accuracy, 0.95);
  const auto rival = std::find_if(
      report.trials.begin(), report.trials.end(), [](const SearchTrial& t) {
        return t.config.hidden == 1280 && t.config.dropout == 0.4;
      });
  ASSERT_NE(rival, report.trials.end());
  EXPECT_DOUBLE_EQ(rival->accuracy, 0.95);
  std::ostringstream csv;
  WriteSearchCsv(report, csv);
  EXPECT_EQ(csv.str().rfind("stage,epochs,hidden,dropout,valid_acc\n", 0), 0u);
}

TEST(SearchTest, StageTwoCoversTopKCrossProduct) {
  TrainConfig base;
  std::set<std::tuple<int, int, double>> seen;
  const auto report = TwoStageSearch(
      base, {{5, 10, 20}, {16, 32, 64}, {0.1, 0.2, 0.3}, 2},
      [&](const TrainConfig& c) {
        seen.emplace(c.epochs, c.hidden, c.dropout);
        return 0.001 * c.epochs + 0.0001 * c.hidden + 0.01 * c.dropout;
      });
  for (int e : {10, 20}) {
    for (int h : {32, 64}) {
      for (double d : {0.2, 0.3}) EXPECT_TRUE(seen.count({e, h, d}));
    }
  }
  EXPECT_EQ(report.best.epochs, 20);
  EXPECT_EQ(report.best.hidden, 64);
  EXPECT_DOUBLE_EQ(report.best.dropout, 0.3);
}

}  // namespace
}  // namespace lide
