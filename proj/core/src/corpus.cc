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

#include "lide/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include "lide/error.h"
#include "lide/features.h"
#include "lide/random.h"
#include "lide/utf8.h"

namespace lide {

Registry::Registry(std::vector<LanguageGroup> groups,
                   std::vector<Language> languages)
    : groups_(std::move(groups)) {
  std::map<std::string, Language, std::less<>> by_code;
  for (auto& lang : languages) {
    if (lang.code.empty()) throw Error("registry: empty language code");
    if (!by_code.emplace(lang.code, lang).second) {
      throw Error("registry: duplicate language code '" + lang.code + "'");
    }
  }
  std::set<std::string> group_names;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& group = groups_[g];
    if (group.members.empty()) {
      throw Error("registry: group '" + group.name + "' has no members");
    }
    if (!group_names.insert(group.name).second) {
      throw Error("registry: duplicate group '" + group.name + "'");
    }
    for (const auto& code : group.members) {
      auto it = by_code.find(code);
      if (it == by_code.end()) {
        throw Error("registry: group '" + group.name +
                    "' lists unknown language '" + code + "'");
      }
      if (it->second.group != group.name) {
        throw Error("registry: language '" + code + "' claims group '" +
                    it->second.group + "' but is listed under '" +
                    group.name + "'");
      }
      languages_.push_back(it->second);
      language_group_.push_back(g);
      by_code.erase(it);
    }
  }
  if (!by_code.empty()) {
    throw Error("registry: language '" + by_code.begin()->first +
                "' belongs to no group");
  }
}

std::shared_ptr<const Registry> Registry::DslDefault() {
  static const auto registry = [] {
    std::vector<LanguageGroup> groups = {
        {"South Eastern Slavic", {"bg", "mk"}, ""},
        {"South Western Slavic", {"bs", "hr", "sr"}, ""},
        {"West-Slavic", {"cz", "sk"}, ""},
        {"Ibero-Romance (Spanish)", {"es-ES", "es-AR"}, "es"},
        {"Ibero-Romance (Portuguese)", {"pt-BR", "pt-PT"}, "pt"},
        {"Astronesian", {"id", "my"}, ""},
    };
    std::vector<Language> languages = {
        {"bg", "South Eastern Slavic", "Bulgarian"},
        {"mk", "South Eastern Slavic", "Macedonian"},
        {"bs", "South Western Slavic", "Bosnian"},
        {"hr", "South Western Slavic", "Croatian"},
        {"sr", "South Western Slavic", "Serbian"},
        {"cz", "West-Slavic", "Czech"},
        {"sk", "West-Slavic", "Slovak"},
        {"es-ES", "Ibero-Romance (Spanish)", "Peninsular Spain"},
        {"es-AR", "Ibero-Romance (Spanish)", "Argentinian Spanish"},
        {"pt-BR", "Ibero-Romance (Portuguese)", "Brazilian Portuguese"},
        {"pt-PT", "Ibero-Romance (Portuguese)", "European Portuguese"},
        {"id", "Astronesian", "Indonesian"},
        {"my", "Astronesian", "Malay"},
    };
    return std::make_shared<const Registry>(std::move(groups),
                                            std::move(languages));
  }();
  return registry;
}

std::optional<std::size_t> Registry::IndexOf(std::string_view code) const {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i].code == code) return i;
  }
  return std::nullopt;
}

const Language* Registry::Find(std::string_view code) const {
  auto i = IndexOf(code);
  return i ? &languages_[*i] : nullptr;
}

std::optional<std::size_t> Registry::GroupIndexOf(
    std::string_view group_name) const {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].name == group_name) return g;
  }
  return std::nullopt;
}

std::size_t Registry::GroupOfLanguage(std::size_t language_index) const {
  return language_group_.at(language_index);
}

Corpus ParseDsl(std::istream& in, std::shared_ptr<const Registry> registry,
                const ParseOptions& options, ParseReport* report) {
  ParseReport local;
  ParseReport& rep = report ? *report : local;
  std::vector<LabeledSentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (auto bad = utf8::FindInvalid(line); bad != std::string::npos) {
      throw Error("invalid UTF-8 at byte offset " +
                  std::to_string(line_start + bad) + " (line " +
                  std::to_string(line_no) + ")");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (WordTokens(line).empty()) {
      ++rep.blank_lines;
      continue;
    }
    const std::size_t tab =
        options.label_first ? line.find('\t') : line.rfind('\t');
    if (tab == std::string::npos) {
      rep.rejected.push_back({line_no, "no tab separator"});
      continue;
    }
    std::string left = line.substr(0, tab);
    std::string right = line.substr(tab + 1);
    std::string& text = options.label_first ? right : left;
    std::string& label = options.label_first ? left : right;
    if (label.empty()) {
      rep.rejected.push_back({line_no, "empty label"});
      continue;
    }
    if (WordTokens(text).empty()) {
      rep.rejected.push_back({line_no, "empty sentence"});
      continue;
    }
    const bool known = registry->IndexOf(label).has_value();
    sentences.push_back({std::move(text), std::move(label), known});
  }
  return Corpus(std::move(sentences), std::move(registry));
}

Corpus ParseDslFile(const std::string& path,
                    std::shared_ptr<const Registry> registry,
                    const ParseOptions& options, ParseReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return ParseDsl(in, std::move(registry), options, report);
}

void WriteDsl(const Corpus& corpus, std::ostream& out,
              const ParseOptions& options) {
  for (const auto& s : corpus.sentences()) {
    if (options.label_first) {
      out << s.label << '\t' << s.text << '\n';
    } else {
      out << s.text << '\t' << s.label << '\n';
    }
  }
}

Corpus KnownOnly(const Corpus& corpus) {
  std::vector<LabeledSentence> kept;
  for (const auto& s : corpus.sentences()) {
    if (s.known) kept.push_back(s);
  }
  return Corpus(std::move(kept), corpus.registry_ptr());
}

std::vector<std::string> DistinctLabels(const Corpus& corpus) {
  std::set<std::string> known;
  std::set<std::string> other;
  for (const auto& s : corpus.sentences()) {
    (s.known ? known : other).insert(s.label);
  }
  std::vector<std::string> out;
  for (const auto& lang : corpus.registry().languages()) {
    if (known.count(lang.code)) out.push_back(lang.code);
  }
  out.insert(out.end(), other.begin(), other.end());
  return out;
}

std::pair<Corpus, Corpus> Split(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.fraction_train > 0.0 && spec.fraction_train < 1.0)) {
    throw Error("split: fraction_train must lie in (0, 1), got " +
                std::to_string(spec.fraction_train));
  }
  if (corpus.empty()) throw Error("split: corpus is empty");

  Rng rng(spec.seed);
  std::vector<bool> in_train(corpus.size(), false);
  auto take = [&](std::vector<std::size_t> idx) {
    rng.Shuffle(&idx);
    const auto n_train = static_cast<std::size_t>(
        std::llround(spec.fraction_train * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < n_train; ++k) in_train[idx[k]] = true;
  };

  if (spec.stratified) {
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      by_label[corpus[i].label].push_back(i);
    }
    for (const auto& [label, idx] : by_label) {
      if (idx.size() < 2) {
        throw Error("split: label '" + label +
                    "' has fewer than 2 sentences; cannot stratify");
      }
    }
    // Labels are visited in lexicographic order so the stream consumption
    // does not depend on file order.
    for (auto& [label, idx] : by_label) take(idx);
  } else {
    std::vector<std::size_t> idx(corpus.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    take(std::move(idx));
  }

  std::vector<LabeledSentence> train;
  std::vector<LabeledSentence> held_out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_train[i] ? train : held_out).push_back(corpus[i]);
  }
  return {Corpus(std::move(train), corpus.registry_ptr()),
          Corpus(std::move(held_out), corpus.registry_ptr())};
}

double VocabOverlap(const Corpus& corpus, std::string_view source,
                    std::string_view target) {
  std::unordered_set<std::string> source_types;
  std::unordered_set<std::string> target_types;
  bool have_source = false;
  bool have_target = false;
  for (const auto& s : corpus.sentences()) {
    const bool is_source = s.label == source;
    const bool is_target = s.label == target;
    if (!is_source && !is_target) continue;
    have_source |= is_source;
    have_target |= is_target;
    for (auto& w : WordTokens(s.text)) {
      if (is_source) source_types.insert(w);
      if (is_target) target_types.insert(std::move(w));
    }
  }
  if (!have_source) {
    throw Error("overlap: language '" + std::string(source) +
                "' is absent from the corpus");
  }
  if (!have_target) {
    throw Error("overlap: language '" + std::string(target) +
                "' is absent from the corpus");
  }
  std::size_t shared = 0;
  for (const auto& w : source_types) shared += target_types.count(w);
  return static_cast<double>(shared) /
         static_cast<double>(source_types.size());
}

}  // namespace lide
