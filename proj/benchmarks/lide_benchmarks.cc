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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "lide/features.h"
#include "lide/linear.h"
#include "lide/random.h"
#include "lide/rnn.h"

namespace lide {
namespace {

std::string Sentence(std::uint64_t seed, std::size_t words) {
  Rng rng(seed);
  std::string text;
  for (std::size_t w = 0; w < words; ++w) {
    if (w > 0) text += ' ';
    const std::size_t len = 2 + rng.Below(8);
    for (std::size_t i = 0; i < len; ++i) {
      text += static_cast<char>('a' + rng.Below(26));
    }
  }
  return text;
}

void BM_CharNgrams(benchmark::State& state) {
  const auto text = Sentence(1, 40);
  const auto mode = state.range(1) ? BoundaryMode::kSpanning
                                   : BoundaryMode::kRestricted;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(CharNgrams(text, n, mode));
  }
  state.SetBytesProcessed(state.iterations() *
                          static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_CharNgrams)->ArgsProduct({{1, 3, 6}, {0, 1}});

void BM_NgramsUpTo9(benchmark::State& state) {
  const auto text = Sentence(2, 40);
  const auto spec = DefaultLinearSpec();
  for (auto _ : state) benchmark::DoNotOptimize(NgramsUpTo(text, spec));
}
BENCHMARK(BM_NgramsUpTo9);

void BM_MnbPredict(benchmark::State& state) {
  std::vector<LabeledSentence> sentences;
  const std::vector<std::string> labels = {"bs", "hr", "sr"};
  for (std::uint64_t i = 0; i < 600; ++i) {
    sentences.push_back({Sentence(100 + i, 12), labels[i % 3], true});
  }
  const Corpus corpus(std::move(sentences), Registry::DslDefault());
  const auto model = TrainMnbClassifier(corpus, DefaultLinearSpec());
  const auto text = Sentence(7, 30);
  for (auto _ : state) benchmark::DoNotOptimize(model.PredictProba(text));
}
BENCHMARK(BM_MnbPredict);

struct GruFixture {
  explicit GruFixture(int hidden) {
    TrainConfig cfg;
    cfg.hidden = hidden;
    cfg.embed_dim = 32;
    params = InitGruParams(500, 13, cfg);
    Rng rng(3);
    ids.resize(100);
    for (auto& id : ids) id = static_cast<std::uint32_t>(rng.Below(500));
  }
  GruParams params;
  std::vector<std::uint32_t> ids;
};

void BM_GruForward(benchmark::State& state) {
  const GruFixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(GruForward(f.params, f.ids));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(f.ids.size()));
}
BENCHMARK(BM_GruForward)->Arg(64)->Arg(256);

void BM_GruForwardBackward(benchmark::State& state) {
  const GruFixture f(static_cast<int>(state.range(0)));
  auto grads = GruParams::Zeros(500, 32, static_cast<std::size_t>(state.range(0)), 13);
  for (auto _ : state) {
    const auto cache = GruForward(f.params, f.ids);
    GruBackwardAccumulate(f.params, cache, 3, &grads);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(f.ids.size()));
}
BENCHMARK(BM_GruForwardBackward)->Arg(64)->Arg(256);

}  // namespace
}  // namespace lide

BENCHMARK_MAIN();
