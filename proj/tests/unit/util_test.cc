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
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "lide/error.h"
#include "lide/random.h"
#include "lide/utf8.h"

namespace lide {
namespace {

TEST(Utf8Test, RoundTripsMixedScripts) {
  const std::string text = "Usto ćšž жщ αω 中文 \U0001F600";
  EXPECT_EQ(utf8::Encode(utf8::Decode(text)), text);
  EXPECT_EQ(utf8::Decode("é").size(), 1u);
  EXPECT_EQ(utf8::Decode("\U0001F600").front(), U'\U0001F600');
}

TEST(Utf8Test, ReportsOffsetOfFirstBadSequence) {
  EXPECT_EQ(utf8::FindInvalid("abc"), std::string::npos);
  EXPECT_EQ(utf8::FindInvalid("ab\xff"), 2u);
  EXPECT_EQ(utf8::FindInvalid("a\xc0\xaf"), 1u);          // overlong
  EXPECT_EQ(utf8::FindInvalid("\xed\xa0\x80"), 0u);       // surrogate
  EXPECT_EQ(utf8::FindInvalid("x\xf4\x90\x80\x80"), 1u);  // > U+10FFFF
  EXPECT_EQ(utf8::FindInvalid("é\xe2\x82"), 2u);          // truncated
  try {
    utf8::Decode("ok\x80");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("byte offset 2"), std::string::npos);
  }
}

TEST(Utf8Test, WhiteSpaceProperty) {
  for (char32_t c : {U' ', U'\t', U'\n', U' ', U' ', U'　',
                     U'\u0085', U' '}) {
    EXPECT_TRUE(utf8::IsSpace(c)) << static_cast<unsigned>(c);
  }
  for (char32_t c : {U'a', U'_', U'​', U'ж', U'­'}) {
    EXPECT_FALSE(utf8::IsSpace(c)) << static_cast<unsigned>(c);
  }
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  std::vector<std::uint64_t> va, vb, vc;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a.Next());
    vb.push_back(b.Next());
    vc.push_back(c.Next());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}

TEST(RngTest, UniformAndBelowStayInRange) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.Below(7), 7u);
  }
}

TEST(RngTest, BelowIsRoughlyUniform) {
  Rng rng(5);
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) ++counts[rng.Below(5)];
  for (int c : counts) EXPECT_NEAR(c, n / 5, 500);
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng(9);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto shuffled = v;
  rng.Shuffle(&shuffled);
  EXPECT_NE(shuffled, v);
  std::sort(shuffled.begin(), shuffled.end());
  EXPECT_EQ(shuffled, v);
}

TEST(RngTest, DeriveSeparatesStreams) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t k = 0; k < 64; ++k) seeds.insert(Rng::Derive(s, k));
  }
  EXPECT_EQ(seeds.size(), 256u);
  EXPECT_EQ(Rng::Derive(3, 1), Rng::Derive(3, 1));
}

}  // namespace
}  // namespace lide
