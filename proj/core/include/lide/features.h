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

#ifndef LIDE_FEATURES_H_
#define LIDE_FEATURES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lide {

enum class Unit { kChar, kWord };
enum class BoundaryMode { kRestricted, kSpanning };

// Which n-grams a model consumes: orders n_min..n_max of one unit. Word
// n-grams are always restricted.
struct NgramSpec {
  Unit unit = Unit::kChar;
  int n_min = 1;
  int n_max = 1;
  BoundaryMode mode = BoundaryMode::kRestricted;

  // Throws lide::Error when the invariants do not hold.
  void Validate() const;

  // Grammar `unit:min-max[:mode]`, e.g. `char:2-2:spanning`, `word:1-1`.
  static NgramSpec Parse(std::string_view text);
  std::string ToString() const;

  bool operator==(const NgramSpec&) const = default;
};

// Maximal runs of non-whitespace scalars, in order.
std::vector<std::string> WordTokens(std::string_view text);

// Length-n character windows (stride 1). Restricted: windows inside each
// word; words shorter than n contribute nothing. Spanning: windows over the
// whole text after trimming and collapsing whitespace runs to one space.
std::vector<std::string> CharNgrams(std::string_view text, int n,
                                    BoundaryMode mode);

// Adjacent word n-grams joined by a single space.
std::vector<std::string> WordNgrams(std::string_view text, int n);

// Concatenation of orders n_min..n_max, each token prefixed with its order
// ("2:ab") so that equal strings of different orders never collide.
std::vector<std::string> NgramsUpTo(std::string_view text,
                                    const NgramSpec& spec);

// Token <-> index map. Index 0 is the out-of-vocabulary sentinel.
class Vocabulary {
 public:
  static constexpr std::uint32_t kOov = 0;

  Vocabulary();

  std::size_t size() const { return tokens_.size(); }
  std::uint32_t IndexOf(std::string_view token) const;
  const std::string& Token(std::uint32_t index) const {
    return tokens_.at(index);
  }
  // Training frequency; for the sentinel, the mass of dropped tokens.
  std::uint64_t Frequency(std::uint32_t index) const {
    return frequencies_.at(index);
  }
  int min_count() const { return min_count_; }
  std::optional<std::size_t> max_size() const { return max_size_; }

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint64_t>& frequencies() const {
    return frequencies_;
  }

  // Rebuilds a vocabulary from its serialized parts; tokens[0] is the
  // sentinel.
  static Vocabulary FromParts(std::vector<std::string> tokens,
                              std::vector<std::uint64_t> frequencies,
                              int min_count,
                              std::optional<std::size_t> max_size);

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && frequencies_ == other.frequencies_ &&
           min_count_ == other.min_count_ && max_size_ == other.max_size_;
  }

  static const std::string& OovToken();

 private:
  friend class VocabBuilder;

  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> frequencies_;
  std::unordered_map<std::string, std::uint32_t> index_;
  int min_count_ = 1;
  std::optional<std::size_t> max_size_;
};

// Streaming frequency counter for BuildVocab.
class VocabBuilder {
 public:
  void Add(const std::vector<std::string>& tokens);
  // Keeps tokens with frequency >= min_count, then the max_size - 1 most
  // frequent (ties broken lexicographically).
  Vocabulary Build(int min_count,
                   std::optional<std::size_t> max_size = std::nullopt) const;

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

Vocabulary BuildVocab(const std::vector<std::vector<std::string>>& streams,
                      int min_count,
                      std::optional<std::size_t> max_size = std::nullopt);

// Sparse row with strictly increasing indices and positive values.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  std::size_t nnz() const { return entries.size(); }
  double Sum() const;

  // Builds from arbitrary (index, value) pairs: sorts, merges duplicates and
  // drops zeros.
  static SparseVector FromPairs(
      std::vector<std::pair<std::uint32_t, double>> pairs);

  bool operator==(const SparseVector&) const = default;
};

SparseVector VectorizeCounts(const std::vector<std::string>& tokens,
                             const Vocabulary& vocab);

inline constexpr std::size_t kDefaultMaxSequenceLength = 256;

// Ids in order (OOV -> 0), truncated to max_len. Empty input throws.
std::vector<std::uint32_t> EncodeSequence(
    const std::vector<std::string>& tokens, const Vocabulary& vocab,
    std::size_t max_len = kDefaultMaxSequenceLength);

}  // namespace lide

#endif  // LIDE_FEATURES_H_
