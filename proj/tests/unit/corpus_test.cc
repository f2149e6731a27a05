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
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "lide/corpus.h"
#include "lide/error.h"
#include "synthetic.h"

namespace lide {
namespace {

std::shared_ptr<const Registry> Dsl() { return Registry::DslDefault(); }

Corpus Parse(const std::string& text, ParseReport* report = nullptr,
             ParseOptions options = {}) {
  std::istringstream in(text);
  return ParseDsl(in, Dsl(), options, report);
}

Corpus Uniform(const std::vector<std::string>& labels, std::size_t per_label) {
  std::vector<LabeledSentence> s;
  for (std::size_t i = 0; i < per_label; ++i) {
    for (const auto& l : labels) {
      s.push_back({l + " sentence " + std::to_string(i), l, true});
    }
  }
  return Corpus(std::move(s), Dsl());
}

TEST(RegistryTest, DslDefaultHasThirteenLanguagesInSixGroups) {
  const auto& reg = *Dsl();
  EXPECT_EQ(reg.languages().size(), 13u);
  EXPECT_EQ(reg.groups().size(), 6u);
  const std::vector<std::string> order = {"bg", "mk", "bs", "hr", "sr",
                                          "cz", "sk", "es-ES", "es-AR",
                                          "pt-BR", "pt-PT", "id", "my"};
  for (std::size_t i = 0; i < order.size(); ++i) {
    EXPECT_EQ(reg.languages()[i].code, order[i]);
    EXPECT_EQ(reg.IndexOf(order[i]), i);
  }
  const auto sw = *reg.GroupIndexOf("South Western Slavic");
  EXPECT_EQ(reg.GroupOfLanguage(*reg.IndexOf("bs")), sw);
  EXPECT_EQ(reg.GroupOfLanguage(*reg.IndexOf("sr")), sw);
  EXPECT_EQ(reg.groups()[*reg.GroupIndexOf("Ibero-Romance (Portuguese)")]
                .base_tag,
            "pt");
  EXPECT_FALSE(reg.IndexOf("xx").has_value());
  EXPECT_EQ(reg.Find("xx"), nullptr);
}

TEST(RegistryTest, RejectsInconsistentTables) {
  EXPECT_THROW(Registry({{"g", {"a", "a"}, ""}},
                        {{"a", "g", "A"}, {"a", "g", "A"}}),
               Error);
  EXPECT_THROW(Registry({{"g", {}, ""}}, {}), Error);
  EXPECT_THROW(Registry({{"g", {"a"}, ""}}, {{"a", "h", "A"}}), Error);
}

TEST(ParseDslTest, SingleRecord) {
  const auto c = Parse("Hola mundo\tes-ES\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].text, "Hola mundo");
  EXPECT_EQ(c[0].label, "es-ES");
  EXPECT_TRUE(c[0].known);
}

TEST(ParseDslTest, EmptyStream) { EXPECT_TRUE(Parse("").empty()); }

TEST(ParseDslTest, UnknownTagIsRetainedAsOther) {
  const auto c = Parse("foo\txx\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].label, "xx");
  EXPECT_FALSE(c[0].known);
  EXPECT_TRUE(KnownOnly(c).empty());
}

TEST(ParseDslTest, BlankAndMalformedLines) {
  ParseReport report;
  const auto c = Parse("a b\tbs\n\n   \nno tab here\n\tbs\nx\t\ny\thr\r\n",
                       &report);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1].text, "y");
  EXPECT_EQ(c[1].label, "hr");
  EXPECT_EQ(report.blank_lines, 2u);
  ASSERT_EQ(report.rejected.size(), 3u);
  EXPECT_EQ(report.rejected[0].line, 4u);
  EXPECT_EQ(report.rejected[1].line, 5u);
  EXPECT_EQ(report.rejected[2].line, 6u);
}

TEST(ParseDslTest, SentenceMayContainTabsWhenLabelIsLast) {
  const auto c = Parse("a\tb\tsr\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].text, "a\tb");
  EXPECT_EQ(c[0].label, "sr");
}

TEST(ParseDslTest, LabelFirstColumnOrder) {
  const auto c = Parse("mk\tдобар ден\n", nullptr, {true});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].label, "mk");
  EXPECT_EQ(c[0].text, "добар ден");
}

TEST(ParseDslTest, InvalidUtf8NamesAbsoluteByteOffset) {
  try {
    Parse("ok\tbs\nb\xffz\thr\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("byte offset 7"), std::string::npos)
        << e.what();
  }
}

TEST(ParseDslTest, WriteThenParseRoundTrips) {
  const auto c = testing::MakeCorpus(testing::DisjointAlphabetLanguages(1),
                                     20, 2);
  for (bool label_first : {false, true}) {
    std::ostringstream out;
    WriteDsl(c, out, {label_first});
    std::istringstream in(out.str());
    EXPECT_EQ(ParseDsl(in, Dsl(), {label_first}), c);
  }
}

TEST(ParseDslTest, MissingFileIsAnError) {
  EXPECT_THROW(ParseDslFile("/nonexistent/lide.txt", Dsl()), Error);
}

TEST(DistinctLabelsTest, RegistryOrderThenOthers) {
  const auto c = Parse("a\tsr\nb\tzz\nc\tbg\nd\taa\ne\tsr\n");
  EXPECT_EQ(DistinctLabels(c),
            (std::vector<std::string>{"bg", "sr", "aa", "zz"}));
}

TEST(SplitTest, NinetyTenAndDeterministic) {
  const auto c = Uniform({"bs"}, 100);
  const auto [train, held] = Split(c, {0.9, 7, true});
  EXPECT_EQ(train.size(), 90u);
  EXPECT_EQ(held.size(), 10u);
  const auto again = Split(c, {0.9, 7, true});
  EXPECT_EQ(again.first, train);
  EXPECT_EQ(again.second, held);
  const auto other = Split(c, {0.9, 8, true});
  EXPECT_NE(other.second, held);
}

TEST(SplitTest, StratifiedHalves) {
  const auto c = Uniform({"bs", "hr"}, 10);
  const auto [train, held] = Split(c, {0.5, 3, true});
  std::map<std::string, int> per_label;
  for (const auto& s : train.sentences()) ++per_label[s.label];
  EXPECT_EQ(per_label["bs"], 5);
  EXPECT_EQ(per_label["hr"], 5);
  EXPECT_EQ(held.size(), 10u);
}

TEST(SplitTest, FractionOutsideOpenIntervalIsAnError) {
  const auto c = Uniform({"bs"}, 10);
  EXPECT_THROW(Split(c, {1.0, 0, true}), Error);
  EXPECT_THROW(Split(c, {0.0, 0, true}), Error);
  EXPECT_THROW(Split(Corpus(), {0.5, 0, true}), Error);
}

TEST(SplitTest, StratifyingASingletonLabelIsAnError) {
  auto c = Parse("a\tbs\nb\tbs\nc\thr\n");
  EXPECT_THROW(Split(c, {0.5, 0, true}), Error);
  EXPECT_NO_THROW(Split(c, {0.5, 0, false}));
}

TEST(SplitTest, PropertyPartitionPreservesOrderAndMultiset) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto c = testing::MakeCorpus(testing::DisjointAlphabetLanguages(seed),
                                       5 + seed % 7, seed);
    for (bool stratified : {true, false}) {
      const double f = 0.2 + 0.03 * static_cast<double>(seed);
      const auto [train, held] = Split(c, {f, seed, stratified});
      ASSERT_EQ(train.size() + held.size(), c.size());
      // Both parts are subsequences of the original file order, and
      // together they are exactly the original multiset.
      std::size_t i = 0, j = 0;
      for (const auto& s : c.sentences()) {
        if (i < train.size() && train[i] == s) {
          ++i;
        } else {
          ASSERT_LT(j, held.size());
          ASSERT_EQ(held[j], s);
          ++j;
        }
      }
      EXPECT_EQ(i, train.size());
      EXPECT_EQ(j, held.size());
    }
  }
}

TEST(VocabOverlapTest, IdenticalSetsGiveOne) {
  const auto c = Parse("a b c\tbs\na b c\thr\n");
  EXPECT_DOUBLE_EQ(VocabOverlap(c, "bs", "hr"), 1.0);
}

TEST(VocabOverlapTest, DisjointAlphabetsGiveZero) {
  const auto c = Parse("abc abc\tbs\nxyz\thr\n");
  EXPECT_DOUBLE_EQ(VocabOverlap(c, "bs", "hr"), 0.0);
}

TEST(VocabOverlapTest, SelfOverlapIsOneAndRelationIsAsymmetric) {
  const auto c = Parse("a b c d\tbs\na b\thr\n");
  EXPECT_DOUBLE_EQ(VocabOverlap(c, "bs", "bs"), 1.0);
  EXPECT_DOUBLE_EQ(VocabOverlap(c, "bs", "hr"), 0.5);
  EXPECT_DOUBLE_EQ(VocabOverlap(c, "hr", "bs"), 1.0);
}

TEST(VocabOverlapTest, AbsentLanguageIsAnError) {
  const auto c = Parse("a\tbs\n");
  EXPECT_THROW(VocabOverlap(c, "bs", "sr"), Error);
}

}  // namespace
}  // namespace lide
