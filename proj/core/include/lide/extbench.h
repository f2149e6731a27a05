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

#ifndef LIDE_EXTBENCH_H_
#define LIDE_EXTBENCH_H_

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lide/corpus.h"
#include "lide/eval.h"

namespace lide {

// Acceptance rules for scoring third-party detectors that cannot tell some
// varieties apart or do not cover some languages.
struct SupportPolicy {
  // Gold sentences in these languages are dropped from the denominator.
  std::set<std::string> unsupported;
  // In these groups a prediction equal to the group's base tag counts as
  // correct for every member.
  std::set<std::string> variety_insensitive_groups;
  // Base-tag overrides by group name; groups default to the registry's tag.
  std::map<std::string, std::string> base_tags;

  // Throws lide::Error naming the first entry the registry cannot resolve.
  void Validate(const Registry& registry) const;

  // {"unsupported": [...], "variety_insensitive_groups": [...],
  //  "base_tags": {"group": "tag"}}; every key optional.
  static SupportPolicy FromJson(std::string_view text);
  static SupportPolicy FromJsonFile(const std::string& path);
};

struct ExternalPrediction {
  std::size_t index = 0;
  std::string tag;
  std::optional<double> confidence;
};

struct ExternalScore {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::size_t skipped = 0;
  std::size_t evaluated = 0;
  std::size_t missing = 0;
  std::size_t correct = 0;
};

// Sentences without a prediction count as mispredictions. Accepted
// base-language predictions land on the diagonal; tags outside the registry
// land in the `other` column.
ExternalScore ScoreExternal(std::span<const ExternalPrediction> predictions,
                            const Corpus& gold, const SupportPolicy& policy);

enum class AdapterKind { kSubprocess, kHttp };

struct AdapterSpec {
  AdapterKind kind = AdapterKind::kSubprocess;
  // Shell command: reads one sentence per line on stdin, writes one tag per
  // line on stdout. An empty output line means "no answer".
  std::string command;
  // HTTP endpoint: POST {"text": ...} answered by {"lang": ...}.
  std::string url;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::size_t parallelism = 4;
  std::chrono::seconds timeout{30};
};

// One prediction per answered sentence, in corpus order. Transient failures
// are retried with exponential backoff; sentences that never get an answer
// are left out. Malformed adapter output throws lide::Error quoting it.
std::vector<ExternalPrediction> RunAdapter(const AdapterSpec& spec,
                                           const Corpus& corpus);

struct BenchmarkEntry {
  std::string solution;
  double accuracy = 0.0;
};

// Table in non-increasing order of accuracy (stable for ties).
void WriteBenchmarkTable(std::vector<BenchmarkEntry> entries,
                         std::ostream& out);

}  // namespace lide

#endif  // LIDE_EXTBENCH_H_
