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

#include "lide/model_io.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lide/ensemble.h"
#include "lide/error.h"
#include "lide/linear.h"
#include "lide/rnn.h"

namespace lide {

using nlohmann::json;

namespace {

// Read-only cursor into the parsed document that knows its JSON-pointer
// path, so every failure names the offending field.
class Node {
 public:
  Node(const json& j, std::string path, const std::string& origin)
      : j_(&j), path_(std::move(path)), origin_(&origin) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error("model file " + *origin_ + ": invalid field " +
                (path_.empty() ? "/" : path_) + ": " + what);
  }

  bool Has(const char* key) const {
    return j_->is_object() && j_->contains(key);
  }

  Node operator[](const char* key) const {
    if (!j_->is_object()) Fail("expected object");
    auto it = j_->find(key);
    if (it == j_->end()) {
      Node(*j_, path_ + "/" + key, *origin_).Fail("missing");
    }
    return Node(*it, path_ + "/" + key, *origin_);
  }

  Node At(std::size_t i) const {
    return Node((*j_)[i], path_ + "/" + std::to_string(i), *origin_);
  }

  std::size_t ArraySize() const {
    if (!j_->is_array()) Fail("expected array");
    return j_->size();
  }

  bool IsNull() const { return j_->is_null(); }

  std::string String() const {
    if (!j_->is_string()) Fail("expected string");
    return j_->get<std::string>();
  }
  double Number() const {
    if (!j_->is_number()) Fail("expected number");
    return j_->get<double>();
  }
  std::int64_t Int() const {
    if (!j_->is_number_integer()) Fail("expected integer");
    return j_->get<std::int64_t>();
  }
  std::uint64_t UInt() const {
    if (!j_->is_number_unsigned() &&
        !(j_->is_number_integer() && j_->get<std::int64_t>() >= 0)) {
      Fail("expected non-negative integer");
    }
    return j_->get<std::uint64_t>();
  }
  int PositiveInt() const {
    const auto v = Int();
    if (v < 1) Fail("expected positive integer");
    return static_cast<int>(v);
  }

  std::vector<double> Doubles() const {
    const std::size_t n = ArraySize();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = At(i).Number();
    return out;
  }
  std::vector<std::string> Strings() const {
    const std::size_t n = ArraySize();
    std::vector<std::string> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = At(i).String();
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  const json* j_;
  std::string path_;
  const std::string* origin_;
};

json MatrixJson(const double* data, std::size_t rows, std::size_t cols) {
  return json{{"rows", rows},
              {"cols", cols},
              {"data", std::vector<double>(data, data + rows * cols)}};
}

std::vector<double> ReadMatrix(const Node& n, std::size_t rows,
                               std::size_t cols) {
  if (n["rows"].UInt() != rows || n["cols"].UInt() != cols) {
    n.Fail("expected shape " + std::to_string(rows) + "x" +
           std::to_string(cols));
  }
  auto data = n["data"].Doubles();
  if (data.size() != rows * cols) n["data"].Fail("wrong element count");
  return data;
}

json RegistryJson(const Registry& r) {
  json groups = json::array();
  for (const auto& g : r.groups()) {
    json langs = json::array();
    for (const auto& code : g.members) {
      langs.push_back(
          {{"code", code}, {"display_name", r.Find(code)->display_name}});
    }
    groups.push_back(
        {{"name", g.name}, {"base_tag", g.base_tag}, {"languages", langs}});
  }
  return json{{"groups", groups}};
}

std::shared_ptr<const Registry> ReadRegistry(const Node& n) {
  std::vector<LanguageGroup> groups;
  std::vector<Language> languages;
  const Node gs = n["groups"];
  for (std::size_t i = 0; i < gs.ArraySize(); ++i) {
    const Node g = gs.At(i);
    LanguageGroup group{g["name"].String(), {}, g["base_tag"].String()};
    const Node ls = g["languages"];
    for (std::size_t k = 0; k < ls.ArraySize(); ++k) {
      const Node l = ls.At(k);
      Language lang{l["code"].String(), group.name,
                    l["display_name"].String()};
      group.members.push_back(lang.code);
      languages.push_back(std::move(lang));
    }
    groups.push_back(std::move(group));
  }
  try {
    auto reg = std::make_shared<const Registry>(std::move(groups),
                                                std::move(languages));
    if (*reg == *Registry::DslDefault()) return Registry::DslDefault();
    return reg;
  } catch (const Error& e) {
    n.Fail(e.what());
  }
}

json VocabJson(const Vocabulary& v) {
  json j{{"min_count", v.min_count()},
         {"tokens", v.tokens()},
         {"frequencies", v.frequencies()}};
  j["max_size"] = v.max_size() ? json(*v.max_size()) : json(nullptr);
  return j;
}

Vocabulary ReadVocab(const Node& n) {
  std::optional<std::size_t> max_size;
  if (!n["max_size"].IsNull()) max_size = n["max_size"].UInt();
  const Node freq = n["frequencies"];
  std::vector<std::uint64_t> frequencies(freq.ArraySize());
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    frequencies[i] = freq.At(i).UInt();
  }
  try {
    return Vocabulary::FromParts(n["tokens"].Strings(), std::move(frequencies),
                                 n["min_count"].PositiveInt(), max_size);
  } catch (const Error& e) {
    n.Fail(e.what());
  }
}

NgramSpec ReadSpec(const Node& n) {
  try {
    return NgramSpec::Parse(n.String());
  } catch (const Error& e) {
    n.Fail(e.what());
  }
}

json LogRegJson(const LogRegModel& m) {
  return json{
      {"weights", MatrixJson(m.weights.data(), m.num_classes, m.num_features)},
      {"bias", m.bias},
      {"config",
       {{"lambda", m.config.lambda},
        {"epochs", m.config.epochs},
        {"learning_rate", m.config.learning_rate},
        {"batch_size", m.config.batch_size},
        {"seed", m.config.seed}}}};
}

LogRegModel ReadLogReg(const Node& n, std::size_t classes,
                       std::size_t features) {
  LogRegModel m;
  m.num_classes = classes;
  m.num_features = features;
  m.weights = ReadMatrix(n["weights"], classes, features);
  m.bias = n["bias"].Doubles();
  if (m.bias.size() != classes) n["bias"].Fail("wrong length");
  const Node c = n["config"];
  m.config.lambda = c["lambda"].Number();
  m.config.epochs = c["epochs"].PositiveInt();
  m.config.learning_rate = c["learning_rate"].Number();
  m.config.batch_size = c["batch_size"].UInt();
  m.config.seed = c["seed"].UInt();
  return m;
}

json GruConfigJson(const TrainConfig& c) {
  json j{{"epochs", c.epochs},
         {"hidden", c.hidden},
         {"dropout", c.dropout},
         {"embed_dim", c.embed_dim},
         {"learning_rate", c.learning_rate},
         {"batch_size", c.batch_size},
         {"max_len", c.max_len},
         {"seed", c.seed},
         {"pooling", c.pooling == Pooling::kMean ? "mean" : "last"},
         {"clip_norm", c.clip_norm},
         {"init_scale", c.init_scale},
         {"min_count", c.min_count}};
  j["max_vocab"] = c.max_vocab ? json(*c.max_vocab) : json(nullptr);
  return j;
}

TrainConfig ReadGruConfig(const Node& n) {
  TrainConfig c;
  c.epochs = n["epochs"].PositiveInt();
  c.hidden = n["hidden"].PositiveInt();
  c.dropout = n["dropout"].Number();
  c.embed_dim = n["embed_dim"].PositiveInt();
  c.learning_rate = n["learning_rate"].Number();
  c.batch_size = n["batch_size"].UInt();
  c.max_len = n["max_len"].UInt();
  c.seed = n["seed"].UInt();
  const std::string pooling = n["pooling"].String();
  if (pooling == "mean") {
    c.pooling = Pooling::kMean;
  } else if (pooling == "last") {
    c.pooling = Pooling::kLast;
  } else {
    n["pooling"].Fail("expected \"mean\" or \"last\"");
  }
  c.clip_norm = n["clip_norm"].Number();
  c.init_scale = n["init_scale"].Number();
  c.min_count = n["min_count"].PositiveInt();
  if (!n["max_vocab"].IsNull()) c.max_vocab = n["max_vocab"].UInt();
  try {
    c.Validate();
  } catch (const Error& e) {
    n.Fail(e.what());
  }
  return c;
}

json Header(const Classifier& m) {
  return json{{"format_version", kModelFormatVersion},
              {"model_type", m.Kind()},
              {"registry", RegistryJson(m.registry())},
              {"labels", m.labels()}};
}

json ToJson(const Classifier& model) {
  json j = Header(model);
  if (const auto* mnb = dynamic_cast<const MnbClassifier*>(&model)) {
    const auto& m = mnb->model();
    j["features"] = mnb->spec().ToString();
    j["vocabulary"] = VocabJson(mnb->vocab());
    j["params"] = {{"alpha", m.alpha},
                   {"log_priors", m.log_priors},
                   {"log_likelihood",
                    MatrixJson(m.log_likelihood.data(), m.num_classes,
                               m.vocab_size)}};
  } else if (const auto* lr = dynamic_cast<const LogRegClassifier*>(&model)) {
    j["features"] = lr->spec().ToString();
    j["vocabulary"] = VocabJson(lr->vocab());
    j["params"] = LogRegJson(lr->model());
  } else if (const auto* gru = dynamic_cast<const GruClassifier*>(&model)) {
    j["features"] = gru->spec().ToString();
    j["vocabulary"] = VocabJson(gru->vocab());
    json params = json::object();
    for (const auto& block : gru->params().Blocks()) {
      params[std::string(block.name)] = std::vector<double>(
          block.values.begin(), block.values.end());
    }
    params["shape"] = {{"vocab", gru->params().vocab_size()},
                       {"embed_dim", gru->params().embed_dim()},
                       {"hidden", gru->params().hidden()},
                       {"classes", gru->params().num_classes()}};
    j["params"] = std::move(params);
    j["config"] = GruConfigJson(gru->config());
    json history = json::array();
    for (const auto& h : gru->history()) {
      history.push_back({{"epoch", h.epoch},
                         {"train_acc", h.train_accuracy},
                         {"valid_acc", h.valid_accuracy}});
    }
    j["history"] = std::move(history);
  } else {
    throw Error("cannot serialize model of kind '" + model.Kind() + "'");
  }
  return j;
}

std::shared_ptr<const Classifier> FromJson(const json& doc,
                                           const std::string& origin,
                                           const std::filesystem::path& dir);

std::shared_ptr<const Classifier> FromJsonChecked(
    const json& doc, const std::string& origin,
    const std::filesystem::path& dir) {
  const Node root(doc, "", origin);
  const auto version = root["format_version"].Int();
  if (version != kModelFormatVersion) {
    root["format_version"].Fail(
        "format version " + std::to_string(version) +
        " is not supported (this build reads version " +
        std::to_string(kModelFormatVersion) + ")");
  }
  return FromJson(doc, origin, dir);
}

std::shared_ptr<const Classifier> FromJson(const json& doc,
                                           const std::string& origin,
                                           const std::filesystem::path& dir) {
  const Node root(doc, "", origin);
  const std::string type = root["model_type"].String();
  auto registry = ReadRegistry(root["registry"]);
  auto labels = root["labels"].Strings();
  if (labels.empty()) root["labels"].Fail("expected at least one label");
  const std::size_t C = labels.size();

  if (type == "ensemble") {
    const Node members_node = root["members"];
    std::vector<MemberPtr> members;
    for (std::size_t k = 0; k < members_node.ArraySize(); ++k) {
      const auto rel = members_node.At(k).String();
      members.push_back(LoadModel((dir / rel).string()));
    }
    if (members.empty()) members_node.Fail("expected at least one member");
    const CombinerKind kind = [&] {
      try {
        return ParseCombiner(root["combiner"].String());
      } catch (const Error& e) {
        root["combiner"].Fail(e.what());
      }
    }();
    LogRegModel meta;
    if (kind == CombinerKind::kStacker) {
      meta = ReadLogReg(root["meta"], C, members.size() * C);
    }
    auto weights = root["weights"].Doubles();
    try {
      return std::make_shared<EnsembleClassifier>(std::move(members), kind,
                                                  std::move(meta),
                                                  std::move(weights));
    } catch (const Error& e) {
      root.Fail(e.what());
    }
  }

  const NgramSpec spec = ReadSpec(root["features"]);
  Vocabulary vocab = ReadVocab(root["vocabulary"]);
  const std::size_t V = vocab.size();
  const Node params = root["params"];
  try {
    if (type == "mnb") {
      MnbModel m;
      m.num_classes = C;
      m.vocab_size = V;
      m.alpha = params["alpha"].Number();
      m.log_priors = params["log_priors"].Doubles();
      if (m.log_priors.size() != C) params["log_priors"].Fail("wrong length");
      m.log_likelihood = ReadMatrix(params["log_likelihood"], C, V);
      return std::make_shared<MnbClassifier>(std::move(labels), registry, spec,
                                             std::move(vocab), std::move(m));
    }
    if (type == "logreg") {
      auto m = ReadLogReg(params, C, V);
      return std::make_shared<LogRegClassifier>(
          std::move(labels), registry, spec, std::move(vocab), std::move(m));
    }
    if (type == "gru") {
      const TrainConfig config = ReadGruConfig(root["config"]);
      const Node shape = params["shape"];
      GruParams p = GruParams::Zeros(shape["vocab"].UInt(),
                                     shape["embed_dim"].UInt(),
                                     shape["hidden"].UInt(),
                                     shape["classes"].UInt());
      for (auto& block : p.Blocks()) {
        const std::string name(block.name);
        const Node field = params[name.c_str()];
        const auto values = field.Doubles();
        if (values.size() != block.values.size()) {
          field.Fail("expected " + std::to_string(block.values.size()) +
                     " values");
        }
        std::copy(values.begin(), values.end(), block.values.begin());
      }
      std::vector<EpochStats> history;
      const Node h = root["history"];
      for (std::size_t i = 0; i < h.ArraySize(); ++i) {
        const Node e = h.At(i);
        history.push_back({static_cast<int>(e["epoch"].Int()),
                           e["train_acc"].Number(), e["valid_acc"].Number()});
      }
      return std::make_shared<GruClassifier>(std::move(labels), registry, spec,
                                             std::move(vocab), std::move(p),
                                             config, std::move(history));
    }
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind("model file ", 0) == 0) throw;
    params.Fail(what);
  }
  root["model_type"].Fail("unknown model type '" + type + "'");
}

json ParseDocument(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("model file " + origin + ": not valid JSON (" + e.what() +
                ")");
  }
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file '" + path + "'");
  out << contents;
  if (!out) throw Error("failed writing model file '" + path + "'");
}

}  // namespace

std::string SerializeModel(const Classifier& model) {
  return ToJson(model).dump() + "\n";
}

std::shared_ptr<const Classifier> DeserializeModel(std::string_view text,
                                                   const std::string& origin) {
  const json doc = ParseDocument(text, origin);
  if (doc.is_object() && doc.value("model_type", "") == "ensemble") {
    throw Error("model file " + origin +
                ": ensembles must be loaded from disk");
  }
  return FromJsonChecked(doc, origin, ".");
}

void SaveModel(const Classifier& model, const std::string& path) {
  if (const auto* ens = dynamic_cast<const EnsembleClassifier*>(&model)) {
    json j = Header(model);
    const std::string base = std::filesystem::path(path).filename().string();
    json members = json::array();
    for (std::size_t k = 0; k < ens->members().size(); ++k) {
      const std::string name = base + ".member" + std::to_string(k);
      const auto member_path =
          (std::filesystem::path(path).parent_path() / name).string();
      SaveModel(*ens->members()[k], member_path);
      members.push_back(name);
    }
    j["members"] = std::move(members);
    j["combiner"] = std::string(CombinerName(ens->combiner()));
    j["weights"] = ens->weights();
    if (ens->combiner() == CombinerKind::kStacker) {
      j["meta"] = LogRegJson(ens->meta());
    }
    WriteFile(path, j.dump() + "\n");
    return;
  }
  WriteFile(path, SerializeModel(model));
}

std::shared_ptr<const Registry> LoadRegistryFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open registry file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const json doc = ParseDocument(ss.str(), path);
  return ReadRegistry(Node(doc, "", path));
}

std::shared_ptr<const Classifier> LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const json doc = ParseDocument(ss.str(), path);
  return FromJsonChecked(doc, path,
                         std::filesystem::path(path).parent_path());
}

}  // namespace lide
