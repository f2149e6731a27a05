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

#ifndef LIDE_TESTS_SUPPORT_ORACLES_H_
#define LIDE_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lide/features.h"
#include "lide/linear.h"
#include "lide/random.h"
#include "lide/rnn.h"

// Straightforward reference implementations used to check the library.
// They share no code with it beyond the data types.
namespace lide::testing {

// Enumerates every length-n substring of the scalar sequence and filters by
// the boundary rule: restricted keeps substrings free of whitespace;
// spanning first trims the text and collapses whitespace runs to one space.
std::vector<std::string> NaiveCharNgrams(const std::string& text, int n,
                                         BoundaryMode mode);

// Posterior computed in linear space straight from the counting formulas,
// then logged.
std::vector<double> BruteForceMnbLogPosterior(
    const std::vector<std::vector<std::uint32_t>>& train_docs,
    const std::vector<int>& labels, std::size_t num_classes,
    std::size_t vocab_size, double alpha,
    const std::vector<std::uint32_t>& doc);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t entries = 0;
};

// Compares GruBackward against central differences of GruLoss over every
// parameter. Relative error is |a - n| / max(|a|, |n|, kGradFloor).
inline constexpr double kGradFloor = 1e-6;
GradCheckResult GruGradientCheck(const GruParams& params,
                                 const std::vector<std::uint32_t>& ids,
                                 int gold, Pooling pooling,
                                 const Vector* mask, double dropout_p,
                                 double eps);

// Random parameters in (-scale, scale), biases included.
GruParams RandomGruParams(std::size_t vocab, std::size_t embed,
                          std::size_t hidden, std::size_t classes,
                          double scale, Rng* rng);

}  // namespace lide::testing

#endif  // LIDE_TESTS_SUPPORT_ORACLES_H_
