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

#include "lide/extbench.h"

#include <stdio.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "lide/error.h"
#include "lide/log.h"

namespace lide {

using nlohmann::json;

void SupportPolicy::Validate(const Registry& registry) const {
  for (const auto& code : unsupported) {
    if (!registry.IndexOf(code)) {
      throw Error("policy: unsupported language '" + code +
                  "' is not in the registry");
    }
  }
  for (const auto& [group, tag] : base_tags) {
    if (!registry.GroupIndexOf(group)) {
      throw Error("policy: base_tags names unknown group '" + group + "'");
    }
    if (tag.empty()) {
      throw Error("policy: empty base tag for group '" + group + "'");
    }
  }
  for (const auto& group : variety_insensitive_groups) {
    auto g = registry.GroupIndexOf(group);
    if (!g) {
      throw Error("policy: variety-insensitive group '" + group +
                  "' is not in the registry");
    }
    if (!base_tags.count(group) && registry.groups()[*g].base_tag.empty()) {
      throw Error("policy: group '" + group + "' has no base-language tag");
    }
  }
}

SupportPolicy SupportPolicy::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("policy: ") + e.what());
  }
  if (!doc.is_object()) throw Error("policy: expected a JSON object");
  SupportPolicy p;
  auto strings = [&](const char* key, std::set<std::string>* out) {
    if (!doc.contains(key)) return;
    const auto& arr = doc[key];
    if (!arr.is_array()) throw Error(std::string("policy: /") + key +
                                     " must be an array of strings");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) {
        throw Error(std::string("policy: /") + key + "/" + std::to_string(i) +
                    " must be a string");
      }
      out->insert(arr[i].get<std::string>());
    }
  };
  strings("unsupported", &p.unsupported);
  strings("variety_insensitive_groups", &p.variety_insensitive_groups);
  if (doc.contains("base_tags")) {
    const auto& obj = doc["base_tags"];
    if (!obj.is_object()) throw Error("policy: /base_tags must be an object");
    for (const auto& [group, tag] : obj.items()) {
      if (!tag.is_string()) {
        throw Error("policy: /base_tags/" + group + " must be a string");
      }
      p.base_tags[group] = tag.get<std::string>();
    }
  }
  return p;
}

SupportPolicy SupportPolicy::FromJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open policy file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

ExternalScore ScoreExternal(std::span<const ExternalPrediction> predictions,
                            const Corpus& gold, const SupportPolicy& policy) {
  const Registry& registry = gold.registry();
  policy.Validate(registry);

  std::vector<const ExternalPrediction*> by_index(gold.size(), nullptr);
  for (const auto& p : predictions) {
    if (p.index >= gold.size()) {
      throw Error("external prediction index " + std::to_string(p.index) +
                  " outside corpus of " + std::to_string(gold.size()));
    }
    if (by_index[p.index]) {
      throw Error("duplicate external prediction for sentence " +
                  std::to_string(p.index));
    }
    by_index[p.index] = &p;
  }

  std::vector<std::string> codes;
  for (const auto& lang : registry.languages()) codes.push_back(lang.code);
  ExternalScore score{0.0, ConfusionMatrix(codes), 0, 0, 0, 0};

  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& label = gold[i].label;
    auto g = registry.IndexOf(label);
    if (!g) {
      throw Error("external benchmark: gold label '" + label +
                  "' is not in the registry");
    }
    if (policy.unsupported.count(label)) {
      ++score.skipped;
      continue;
    }
    ++score.evaluated;
    const ExternalPrediction* pred = by_index[i];
    if (!pred) {
      ++score.missing;
      ++score.confusion.other[*g];
      continue;
    }
    bool accepted = pred->tag == label;
    if (!accepted) {
      const auto& group = registry.groups()[registry.GroupOfLanguage(*g)];
      if (policy.variety_insensitive_groups.count(group.name)) {
        auto it = policy.base_tags.find(group.name);
        const std::string& base =
            it != policy.base_tags.end() ? it->second : group.base_tag;
        accepted = pred->tag == base;
      }
    }
    if (accepted) {
      ++score.correct;
      ++score.confusion.at(*g, *g);
    } else if (auto p = registry.IndexOf(pred->tag)) {
      ++score.confusion.at(*g, *p);
    } else {
      ++score.confusion.other[*g];
    }
  }
  score.accuracy = score.evaluated == 0
                       ? 0.0
                       : static_cast<double>(score.correct) /
                             static_cast<double>(score.evaluated);
  return score;
}

namespace {

void Backoff(const AdapterSpec& spec, int attempt) {
  std::this_thread::sleep_for(spec.initial_backoff * (1 << attempt));
}

void CheckTag(const std::string& tag, std::size_t line_no) {
  for (char c : tag) {
    if (c == ' ' || c == '\t') {
      throw Error("adapter protocol violation at output line " +
                  std::to_string(line_no) + ": '" + tag + "'");
    }
  }
}

struct ProcessResult {
  int status = -1;
  std::vector<std::string> lines;
};

ProcessResult RunOnce(const std::string& command,
                      const std::filesystem::path& input) {
  const std::string full = "(" + command + ") < '" + input.string() + "'";
  ProcessResult result;
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) return result;
  std::string current;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    current.append(buf, n);
  }
  const int status = ::pclose(pipe);
  result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::size_t start = 0;
  while (start < current.size()) {
    std::size_t nl = current.find('\n', start);
    if (nl == std::string::npos) nl = current.size();
    std::string line = current.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    result.lines.push_back(std::move(line));
    start = nl + 1;
  }
  return result;
}

std::vector<ExternalPrediction> RunSubprocess(const AdapterSpec& spec,
                                              const Corpus& corpus) {
  if (spec.command.empty()) throw Error("adapter: empty command");
  char tmpl[] = "/tmp/lide-adapter-XXXXXX";
  const int fd = ::mkstemp(tmpl);
  if (fd < 0) throw Error("adapter: cannot create temporary input file");
  ::close(fd);
  const std::filesystem::path input(tmpl);
  {
    std::ofstream out(input, std::ios::binary);
    for (const auto& s : corpus.sentences()) out << s.text << '\n';
  }

  ProcessResult result;
  bool ok = false;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    if (attempt > 0) Backoff(spec, attempt - 1);
    result = RunOnce(spec.command, input);
    if (result.status == 0) {
      ok = true;
      break;
    }
    LogWarning("adapter attempt " + std::to_string(attempt + 1) +
               " exited with status " + std::to_string(result.status));
  }
  std::filesystem::remove(input);
  if (!ok) {
    LogWarning("adapter failed permanently; all sentences recorded missing");
    return {};
  }
  if (result.lines.size() > corpus.size()) {
    throw Error("adapter protocol violation at output line " +
                std::to_string(corpus.size() + 1) + ": '" +
                result.lines[corpus.size()] + "' (more lines than input)");
  }
  std::vector<ExternalPrediction> out;
  for (std::size_t i = 0; i < result.lines.size(); ++i) {
    const auto& tag = result.lines[i];
    if (tag.empty()) continue;
    CheckTag(tag, i + 1);
    out.push_back({i, tag, std::nullopt});
  }
  return out;
}

struct ParsedUrl {
  std::string origin;
  std::string path;
};

ParsedUrl ParseUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error("adapter: URL '" + url + "' lacks a scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::vector<ExternalPrediction> RunHttp(const AdapterSpec& spec,
                                        const Corpus& corpus) {
  const ParsedUrl url = ParseUrl(spec.url);
  std::vector<std::optional<ExternalPrediction>> slots(corpus.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::optional<Error> first_error;

  auto worker = [&] {
    httplib::Client client(url.origin);
    client.set_connection_timeout(spec.timeout);
    client.set_read_timeout(spec.timeout);
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= corpus.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error) return;
      }
      const std::string body = json{{"text", corpus[i].text}}.dump();
      for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
        if (attempt > 0) Backoff(spec, attempt - 1);
        auto res = client.Post(url.path, body, "application/json");
        if (!res || res->status >= 500 || res->status == 429) continue;
        if (res->status != 200) break;  // permanent: leave missing
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.is_object() ||
            !reply.contains("lang") || !reply["lang"].is_string()) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) {
            first_error = Error("adapter protocol violation for sentence " +
                                std::to_string(i) + ": '" + res->body + "'");
          }
          return;
        }
        ExternalPrediction p{i, reply["lang"].get<std::string>(),
                             std::nullopt};
        if (reply.contains("confidence") &&
            reply["confidence"].is_number()) {
          p.confidence = reply["confidence"].get<double>();
        }
        if (!p.tag.empty()) slots[i] = std::move(p);
        break;
      }
    }
  };

  const std::size_t n_threads =
      std::max<std::size_t>(1, std::min(spec.parallelism, corpus.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) throw *first_error;

  std::vector<ExternalPrediction> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace

std::vector<ExternalPrediction> RunAdapter(const AdapterSpec& spec,
                                           const Corpus& corpus) {
  if (spec.max_attempts < 1) throw Error("adapter: max_attempts must be >= 1");
  if (corpus.empty()) return {};
  return spec.kind == AdapterKind::kSubprocess ? RunSubprocess(spec, corpus)
                                               : RunHttp(spec, corpus);
}

void WriteBenchmarkTable(std::vector<BenchmarkEntry> entries,
                         std::ostream& out) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) {
                     return a.accuracy > b.accuracy;
                   });
  out << "solution\taccuracy\n";
  for (const auto& e : entries) {
    out << e.solution << '\t' << std::lround(e.accuracy * 100.0) << "%\n";
  }
}

}  // namespace lide
