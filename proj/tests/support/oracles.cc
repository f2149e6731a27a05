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

#include "oracles.h"

#include <algorithm>
#include <cmath>

#include "lide/utf8.h"

namespace lide::testing {
namespace {

// Unicode White_Space, listed out.
bool IsWhite(char32_t c) {
  static const char32_t kWhite[] = {
      0x09,   0x0A,   0x0B,   0x0C,   0x0D,   0x20,   0x85,   0xA0,
      0x1680, 0x2000, 0x2001, 0x2002, 0x2003, 0x2004, 0x2005, 0x2006,
      0x2007, 0x2008, 0x2009, 0x200A, 0x2028, 0x2029, 0x202F, 0x205F,
      0x3000};
  return std::find(std::begin(kWhite), std::end(kWhite), c) !=
         std::end(kWhite);
}

}  // namespace

std::vector<std::string> NaiveCharNgrams(const std::string& text, int n,
                                         BoundaryMode mode) {
  std::u32string s = utf8::Decode(text);
  if (mode == BoundaryMode::kSpanning) {
    std::u32string norm;
    bool pending_space = false;
    for (char32_t c : s) {
      if (IsWhite(c)) {
        pending_space = !norm.empty();
      } else {
        if (pending_space) norm.push_back(U' ');
        pending_space = false;
        norm.push_back(c);
      }
    }
    s = norm;
  }
  std::vector<std::string> out;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= s.size(); ++i) {
    const auto sub = s.substr(i, len);
    if (mode == BoundaryMode::kRestricted &&
        std::any_of(sub.begin(), sub.end(), IsWhite)) {
      continue;
    }
    out.push_back(utf8::Encode(sub));
  }
  return out;
}

std::vector<double> BruteForceMnbLogPosterior(
    const std::vector<std::vector<std::uint32_t>>& train_docs,
    const std::vector<int>& labels, std::size_t num_classes,
    std::size_t vocab_size, double alpha,
    const std::vector<std::uint32_t>& doc) {
  std::vector<double> docs_per_class(num_classes, 0.0);
  std::vector<std::vector<double>> counts(
      num_classes, std::vector<double>(vocab_size, 0.0));
  for (std::size_t i = 0; i < train_docs.size(); ++i) {
    docs_per_class[labels[i]] += 1.0;
    for (auto t : train_docs[i]) counts[labels[i]][t] += 1.0;
  }
  std::vector<double> joint(num_classes);
  double evidence = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    double total = 0.0;
    for (double v : counts[c]) total += v;
    double p = docs_per_class[c] / static_cast<double>(train_docs.size());
    for (auto t : doc) {
      p *= (counts[c][t] + alpha) /
           (total + alpha * static_cast<double>(vocab_size));
    }
    joint[c] = p;
    evidence += p;
  }
  for (double& p : joint) p = std::log(p / evidence);
  return joint;
}

GradCheckResult GruGradientCheck(const GruParams& params,
                                 const std::vector<std::uint32_t>& ids,
                                 int gold, Pooling pooling,
                                 const Vector* mask, double dropout_p,
                                 double eps) {
  const auto cache = GruForward(params, ids, pooling, mask, dropout_p);
  const GruParams analytic = GruBackward(params, cache, gold);
  GruParams probe = params;
  auto probe_blocks = probe.Blocks();
  const auto grad_blocks = analytic.Blocks();
  GradCheckResult result;
  for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
    auto values = probe_blocks[b].values;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + eps;
      const double plus = GruLoss(probe, ids, gold, pooling, mask, dropout_p);
      values[k] = saved - eps;
      const double minus = GruLoss(probe, ids, gold, pooling, mask, dropout_p);
      values[k] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = grad_blocks[b].values[k];
      const double denom =
          std::max({std::abs(a), std::abs(numeric), kGradFloor});
      result.max_relative_error =
          std::max(result.max_relative_error, std::abs(a - numeric) / denom);
      ++result.entries;
    }
  }
  return result;
}

GruParams RandomGruParams(std::size_t vocab, std::size_t embed,
                          std::size_t hidden, std::size_t classes,
                          double scale, Rng* rng) {
  GruParams p = GruParams::Zeros(vocab, embed, hidden, classes);
  for (auto& block : p.Blocks()) {
    for (double& v : block.values) v = rng->Uniform(-scale, scale);
  }
  return p;
}

}  // namespace lide::testing
