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

#include "lide/eval.h"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "lide/error.h"

namespace lide {

double Accuracy(std::span<const std::string> predictions,
                std::span<const std::string> golds) {
  if (predictions.size() != golds.size()) {
    throw Error("accuracy: " + std::to_string(predictions.size()) +
                " predictions for " + std::to_string(golds.size()) +
                " gold labels");
  }
  if (golds.empty()) throw Error("accuracy: nothing to score");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    correct += predictions[i] == golds[i];
  }
  return static_cast<double>(correct) / static_cast<double>(golds.size());
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels_in)
    : labels(std::move(labels_in)),
      counts(labels.size() * labels.size(), 0),
      other(labels.size(), 0) {}

std::uint64_t ConfusionMatrix::RowSum(std::size_t gold) const {
  std::uint64_t s = other[gold];
  for (std::size_t p = 0; p < size(); ++p) s += at(gold, p);
  return s;
}

std::uint64_t ConfusionMatrix::Trace() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += at(i, i);
  return s;
}

std::uint64_t ConfusionMatrix::Total() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += RowSum(i);
  return s;
}

double ConfusionMatrix::Accuracy() const {
  const auto total = Total();
  return total == 0 ? 0.0
                    : static_cast<double>(Trace()) / static_cast<double>(total);
}

ConfusionMatrix Confusion(std::span<const std::string> predictions,
                          std::span<const std::string> golds,
                          const Registry& registry, bool collapse_groups) {
  if (predictions.size() != golds.size()) {
    throw Error("confusion: " + std::to_string(predictions.size()) +
                " predictions for " + std::to_string(golds.size()) +
                " gold labels");
  }
  std::vector<std::string> codes;
  for (const auto& lang : registry.languages()) codes.push_back(lang.code);
  ConfusionMatrix m(std::move(codes));
  auto resolve = [&](const std::string& label, const char* role) {
    auto i = registry.IndexOf(label);
    if (!i) {
      throw Error(std::string("confusion: unknown ") + role + " label '" +
                  label + "'");
    }
    return *i;
  };
  for (std::size_t i = 0; i < golds.size(); ++i) {
    ++m.at(resolve(golds[i], "gold"), resolve(predictions[i], "predicted"));
  }
  return collapse_groups ? CollapseGroups(m, registry) : m;
}

ConfusionMatrix CollapseGroups(const ConfusionMatrix& languages,
                               const Registry& registry) {
  if (languages.size() != registry.languages().size()) {
    throw Error("confusion: matrix does not match the registry");
  }
  std::vector<std::string> names;
  for (const auto& g : registry.groups()) names.push_back(g.name);
  ConfusionMatrix m(std::move(names));
  for (std::size_t a = 0; a < languages.size(); ++a) {
    const std::size_t ga = registry.GroupOfLanguage(a);
    m.other[ga] += languages.other[a];
    for (std::size_t b = 0; b < languages.size(); ++b) {
      m.at(ga, registry.GroupOfLanguage(b)) += languages.at(a, b);
    }
  }
  return m;
}

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool HasOther(const ConfusionMatrix& m) {
  for (auto v : m.other) {
    if (v != 0) return true;
  }
  return false;
}

}  // namespace

void WriteConfusionCsv(const ConfusionMatrix& matrix, std::ostream& out) {
  const bool other = HasOther(matrix);
  out << "gold\\predicted";
  for (const auto& l : matrix.labels) out << ',' << CsvField(l);
  if (other) out << ",other";
  out << '\n';
  for (std::size_t g = 0; g < matrix.size(); ++g) {
    out << CsvField(matrix.labels[g]);
    for (std::size_t p = 0; p < matrix.size(); ++p) out << ',' << matrix.at(g, p);
    if (other) out << ',' << matrix.other[g];
    out << '\n';
  }
}

LinearKind ParseLinearKind(std::string_view name) {
  if (name == "mnb") return LinearKind::kMnb;
  if (name == "logreg") return LinearKind::kLogReg;
  throw Error("n-gram sweeps support mnb and logreg, not '" +
              std::string(name) + "'");
}

std::vector<std::string> PredictAll(const Classifier& model,
                                    const Corpus& corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) out.push_back(model.Predict(s.text));
  return out;
}

std::vector<std::string> Golds(const Corpus& corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) out.push_back(s.label);
  return out;
}

std::vector<SweepRow> NgramSweep(const Corpus& train, const Corpus& valid,
                                 LinearKind kind, Unit unit, int n_from,
                                 int n_to, BoundaryMode mode,
                                 const SweepOptions& options) {
  if (n_from < 1 || n_to < n_from) {
    throw Error("sweep: empty or invalid n range");
  }
  if (unit == Unit::kWord) mode = BoundaryMode::kRestricted;
  const auto golds = Golds(valid);
  std::vector<SweepRow> rows;
  for (int n = n_from; n <= n_to; ++n) {
    const NgramSpec spec{unit, 1, n, mode};
    std::vector<std::string> predictions;
    if (kind == LinearKind::kMnb) {
      predictions = PredictAll(TrainMnbClassifier(train, spec, options.mnb),
                               valid);
    } else {
      predictions = PredictAll(
          TrainLogRegClassifier(train, spec, options.logreg), valid);
    }
    rows.push_back({n, Accuracy(predictions, golds)});
  }
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "n,accuracy\n";
  for (const auto& r : rows) out << r.n << ',' << r.accuracy << '\n';
}

PrefixTrajectory PrefixScan(const Classifier& model,
                            std::string_view sentence) {
  const auto words = WordTokens(sentence);
  if (words.empty()) throw Error("prefix scan: sentence has no words");
  PrefixTrajectory traj;
  traj.sentence = std::string(sentence);
  std::string prefix;
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (k > 0) prefix += ' ';
    prefix += words[k];
    PrefixStep step;
    step.words = k + 1;
    step.prefix = prefix;
    step.probs = model.PredictProba(prefix);
    step.label = model.labels()[ArgMax(step.probs)];
    traj.steps.push_back(std::move(step));
  }
  return traj;
}

void WriteTrajectoryTsv(const PrefixTrajectory& trajectory,
                        std::ostream& out) {
  for (const auto& step : trajectory.steps) {
    out << step.words << '\t' << step.prefix << '\t' << step.label << '\t';
    std::ostringstream probs;
    probs << std::setprecision(6);
    for (std::size_t c = 0; c < step.probs.size(); ++c) {
      if (c > 0) probs << ',';
      probs << step.probs[c];
    }
    out << probs.str() << '\n';
  }
}

}  // namespace lide
