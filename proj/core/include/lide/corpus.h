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

#ifndef LIDE_CORPUS_H_
#define LIDE_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lide {

struct Language {
  std::string code;
  std::string group;
  std::string display_name;

  bool operator==(const Language&) const = default;
};

struct LanguageGroup {
  std::string name;
  std::vector<std::string> members;
  // Tag a variety-blind detector emits for this group ("es", "pt"); empty
  // when the group has no single base language.
  std::string base_tag;

  bool operator==(const LanguageGroup&) const = default;
};

// Language/group table. Groups partition the languages; language order is
// group order then member order and fixes every confusion-matrix layout.
class Registry {
 public:
  // Throws lide::Error on duplicate codes or empty groups.
  explicit Registry(std::vector<LanguageGroup> groups,
                    std::vector<Language> languages);

  // The 13 DSL 2015 varieties in their 6 groups.
  static std::shared_ptr<const Registry> DslDefault();

  const std::vector<Language>& languages() const { return languages_; }
  const std::vector<LanguageGroup>& groups() const { return groups_; }

  std::optional<std::size_t> IndexOf(std::string_view code) const;
  const Language* Find(std::string_view code) const;
  std::optional<std::size_t> GroupIndexOf(std::string_view group_name) const;
  // Group index of a language; the code must be known.
  std::size_t GroupOfLanguage(std::size_t language_index) const;

  bool operator==(const Registry&) const = default;

 private:
  std::vector<LanguageGroup> groups_;
  std::vector<Language> languages_;
  std::vector<std::size_t> language_group_;
};

struct LabeledSentence {
  std::string text;
  std::string label;
  // False for tags the registry does not know (the Other(tag) case, e.g.
  // the mixed-language noise set).
  bool known = true;

  bool operator==(const LabeledSentence&) const = default;
};

class Corpus {
 public:
  Corpus() : registry_(Registry::DslDefault()) {}
  Corpus(std::vector<LabeledSentence> sentences,
         std::shared_ptr<const Registry> registry)
      : sentences_(std::move(sentences)), registry_(std::move(registry)) {}

  const std::vector<LabeledSentence>& sentences() const { return sentences_; }
  const Registry& registry() const { return *registry_; }
  const std::shared_ptr<const Registry>& registry_ptr() const {
    return registry_;
  }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const LabeledSentence& operator[](std::size_t i) const {
    return sentences_[i];
  }

  bool operator==(const Corpus& other) const {
    return sentences_ == other.sentences_ && *registry_ == *other.registry_;
  }

 private:
  std::vector<LabeledSentence> sentences_;
  std::shared_ptr<const Registry> registry_;
};

struct ParseOptions {
  // Column order `label<TAB>sentence` instead of `sentence<TAB>label`.
  bool label_first = false;
};

struct ParseReport {
  struct Rejection {
    std::size_t line = 0;
    std::string reason;
  };
  std::size_t blank_lines = 0;
  std::vector<Rejection> rejected;
};

// Reads DSL-format text. Blank lines are skipped and counted; malformed
// records are rejected and listed in `report`. Invalid UTF-8 throws
// lide::Error naming the absolute byte offset.
Corpus ParseDsl(std::istream& in, std::shared_ptr<const Registry> registry,
                const ParseOptions& options = {},
                ParseReport* report = nullptr);
Corpus ParseDslFile(const std::string& path,
                    std::shared_ptr<const Registry> registry,
                    const ParseOptions& options = {},
                    ParseReport* report = nullptr);

void WriteDsl(const Corpus& corpus, std::ostream& out,
              const ParseOptions& options = {});

// Drops Other(tag) sentences.
Corpus KnownOnly(const Corpus& corpus);

// Distinct labels of the corpus: known ones in registry order, then other
// tags lexicographically.
std::vector<std::string> DistinctLabels(const Corpus& corpus);

struct SplitSpec {
  double fraction_train = 0.9;
  std::uint64_t seed = 0;
  bool stratified = true;
};

// Seeded partition into (train, held-out). Each part keeps file order.
std::pair<Corpus, Corpus> Split(const Corpus& corpus, const SplitSpec& spec);

// Share of the source language's word types that also occur under the
// target language.
double VocabOverlap(const Corpus& corpus, std::string_view source,
                    std::string_view target);

}  // namespace lide

#endif  // LIDE_CORPUS_H_
