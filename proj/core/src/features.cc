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

#include "lide/features.h"

#include <algorithm>
#include <charconv>

#include "lide/error.h"
#include "lide/utf8.h"

namespace lide {
namespace {

std::vector<std::u32string> SplitWords(std::u32string_view text) {
  std::vector<std::u32string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && utf8::IsSpace(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !utf8::IsSpace(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

void AppendWindows(std::u32string_view s, int n,
                   std::vector<std::string>* out) {
  const auto len = static_cast<std::size_t>(n);
  if (s.size() < len) return;
  for (std::size_t i = 0; i + len <= s.size(); ++i) {
    out->push_back(utf8::Encode(s.substr(i, len)));
  }
}

int ParseInt(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("bad n-gram spec '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

void NgramSpec::Validate() const {
  if (n_min < 1) throw Error("n-gram spec: n_min must be >= 1");
  if (n_max < n_min) throw Error("n-gram spec: n_max must be >= n_min");
  if (unit == Unit::kWord && mode != BoundaryMode::kRestricted) {
    throw Error("n-gram spec: word n-grams cannot span boundaries");
  }
}

NgramSpec NgramSpec::Parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw Error("bad n-gram spec '" + std::string(text) +
                "' (expected unit:min-max[:mode])");
  }
  NgramSpec spec;
  if (parts[0] == "char") {
    spec.unit = Unit::kChar;
  } else if (parts[0] == "word") {
    spec.unit = Unit::kWord;
  } else {
    throw Error("bad n-gram unit '" + std::string(parts[0]) + "'");
  }
  const std::size_t dash = parts[1].find('-');
  if (dash == std::string_view::npos) {
    spec.n_min = spec.n_max = ParseInt(parts[1], text);
  } else {
    spec.n_min = ParseInt(parts[1].substr(0, dash), text);
    spec.n_max = ParseInt(parts[1].substr(dash + 1), text);
  }
  if (parts.size() == 3) {
    if (parts[2] == "restricted") {
      spec.mode = BoundaryMode::kRestricted;
    } else if (parts[2] == "spanning") {
      spec.mode = BoundaryMode::kSpanning;
    } else {
      throw Error("bad boundary mode '" + std::string(parts[2]) + "'");
    }
  }
  spec.Validate();
  return spec;
}

std::string NgramSpec::ToString() const {
  std::string s = unit == Unit::kChar ? "char:" : "word:";
  s += std::to_string(n_min) + "-" + std::to_string(n_max);
  if (unit == Unit::kChar) {
    s += mode == BoundaryMode::kRestricted ? ":restricted" : ":spanning";
  }
  return s;
}

std::vector<std::string> WordTokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& w : SplitWords(utf8::Decode(text))) {
    out.push_back(utf8::Encode(w));
  }
  return out;
}

std::vector<std::string> CharNgrams(std::string_view text, int n,
                                    BoundaryMode mode) {
  if (n < 1) throw Error("char n-grams: n must be >= 1");
  std::vector<std::string> out;
  const auto words = SplitWords(utf8::Decode(text));
  if (mode == BoundaryMode::kRestricted) {
    for (const auto& w : words) AppendWindows(w, n, &out);
  } else {
    std::u32string joined;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i > 0) joined.push_back(U' ');
      joined += words[i];
    }
    AppendWindows(joined, n, &out);
  }
  return out;
}

std::vector<std::string> WordNgrams(std::string_view text, int n) {
  if (n < 1) throw Error("word n-grams: n must be >= 1");
  const auto words = WordTokens(text);
  std::vector<std::string> out;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= words.size(); ++i) {
    std::string gram = words[i];
    for (std::size_t k = 1; k < len; ++k) {
      gram.push_back(' ');
      gram += words[i + k];
    }
    out.push_back(std::move(gram));
  }
  return out;
}

std::vector<std::string> NgramsUpTo(std::string_view text,
                                    const NgramSpec& spec) {
  spec.Validate();
  std::vector<std::string> out;
  for (int m = spec.n_min; m <= spec.n_max; ++m) {
    const std::string tag = std::to_string(m) + ":";
    auto grams = spec.unit == Unit::kChar ? CharNgrams(text, m, spec.mode)
                                          : WordNgrams(text, m);
    for (auto& g : grams) out.push_back(tag + g);
  }
  return out;
}

const std::string& Vocabulary::OovToken() {
  static const std::string token = "<oov>";
  return token;
}

Vocabulary::Vocabulary() : tokens_{OovToken()}, frequencies_{0} {}

std::uint32_t Vocabulary::IndexOf(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kOov : it->second;
}

Vocabulary Vocabulary::FromParts(std::vector<std::string> tokens,
                                 std::vector<std::uint64_t> frequencies,
                                 int min_count,
                                 std::optional<std::size_t> max_size) {
  if (tokens.empty() || tokens.size() != frequencies.size()) {
    throw Error("vocabulary: token/frequency arrays are empty or mismatched");
  }
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.frequencies_ = std::move(frequencies);
  v.min_count_ = min_count;
  v.max_size_ = max_size;
  for (std::uint32_t i = 1; i < v.tokens_.size(); ++i) {
    if (!v.index_.emplace(v.tokens_[i], i).second) {
      throw Error("vocabulary: duplicate token '" + v.tokens_[i] + "'");
    }
  }
  return v;
}

void VocabBuilder::Add(const std::vector<std::string>& tokens) {
  for (const auto& t : tokens) ++counts_[t];
}

Vocabulary VocabBuilder::Build(int min_count,
                               std::optional<std::size_t> max_size) const {
  if (min_count < 1) throw Error("vocabulary: min_count must be >= 1");
  if (max_size && *max_size < 1) {
    throw Error("vocabulary: max_size must be >= 1");
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  std::uint64_t dropped = 0;
  for (const auto& [token, count] : counts_) {
    if (count >= static_cast<std::uint64_t>(min_count)) {
      kept.emplace_back(token, count);
    } else {
      dropped += count;
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (max_size && kept.size() > *max_size - 1) {
    for (std::size_t i = *max_size - 1; i < kept.size(); ++i) {
      dropped += kept[i].second;
    }
    kept.resize(*max_size - 1);
  }
  Vocabulary v;
  v.min_count_ = min_count;
  v.max_size_ = max_size;
  v.frequencies_[0] = dropped;
  for (auto& [token, count] : kept) {
    v.index_.emplace(token, static_cast<std::uint32_t>(v.tokens_.size()));
    v.tokens_.push_back(token);
    v.frequencies_.push_back(count);
  }
  return v;
}

Vocabulary BuildVocab(const std::vector<std::vector<std::string>>& streams,
                      int min_count, std::optional<std::size_t> max_size) {
  VocabBuilder builder;
  for (const auto& s : streams) builder.Add(s);
  return builder.Build(min_count, max_size);
}

double SparseVector::Sum() const {
  double total = 0.0;
  for (const auto& [i, v] : entries) total += v;
  return total;
}

SparseVector SparseVector::FromPairs(
    std::vector<std::pair<std::uint32_t, double>> pairs) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector out;
  for (const auto& [i, v] : pairs) {
    if (!out.entries.empty() && out.entries.back().first == i) {
      out.entries.back().second += v;
    } else {
      out.entries.emplace_back(i, v);
    }
  }
  std::erase_if(out.entries, [](const auto& e) { return e.second == 0.0; });
  return out;
}

SparseVector VectorizeCounts(const std::vector<std::string>& tokens,
                             const Vocabulary& vocab) {
  std::vector<std::pair<std::uint32_t, double>> pairs;
  pairs.reserve(tokens.size());
  for (const auto& t : tokens) pairs.emplace_back(vocab.IndexOf(t), 1.0);
  return SparseVector::FromPairs(std::move(pairs));
}

std::vector<std::uint32_t> EncodeSequence(
    const std::vector<std::string>& tokens, const Vocabulary& vocab,
    std::size_t max_len) {
  if (max_len < 1) throw Error("sequence encoding: max_len must be >= 1");
  if (tokens.empty()) {
    throw Error("sequence encoding: empty token sequence");
  }
  const std::size_t n = std::min(tokens.size(), max_len);
  std::vector<std::uint32_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = vocab.IndexOf(tokens[i]);
  return ids;
}

}  // namespace lide
