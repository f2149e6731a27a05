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
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "lide/eval.h"
#include "lide/linear.h"
#include "lide/log.h"
#include "lide/model_io.h"
#include "synthetic.h"

namespace lide {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "lide");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  Result r;
  r.code = cli::Run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SetWarningsEnabled(false);
    dir_ = testing::TempDir("cli");
    const auto langs = testing::DisjointAlphabetLanguages(71);
    train_ = testing::WriteTempCorpus(testing::MakeCorpus(langs, 40, 72),
                                      "cli_train.txt");
    test_ = testing::WriteTempCorpus(testing::MakeCorpus(langs, 10, 73),
                                     "cli_test.txt");
  }
  void TearDown() override { SetWarningsEnabled(true); }
  std::string Path(const std::string& name) const { return dir_ + "/" + name; }

  std::string dir_, train_, test_;
};

TEST_F(CliTest, TrainPrintsSummaryAndWritesModel) {
  const auto r = RunCli({"train", "--model", "mnb", "--ngram",
                         "char:1-6:restricted", "--train", train_, "--out",
                         Path("mnb.model")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("training accuracy 1.0000"), std::string::npos)
      << r.out;
  EXPECT_EQ(LoadModel(Path("mnb.model"))->Kind(), "mnb");
}

TEST_F(CliTest, PredictIsLineInLineOut) {
  ASSERT_EQ(RunCli({"train", "--model", "mnb", "--train", train_, "--out",
                    Path("m")})
                .code,
            0);
  const auto model = LoadModel(Path("m"));
  const std::string a = "жаба бежи";
  const std::string b = "ωμέγα";
  const auto r = RunCli({"predict", "--model", Path("m")},
                        a + "\n\n   \n" + b + "\r\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, model->Predict(a) + "\nund\nund\n" + model->Predict(b) +
                       "\n");
}

TEST_F(CliTest, PredictFixtureAgreesWithPosterior) {
  std::ostringstream corpus;
  corpus << "Hola mundo\tes-ES\nHola amigos\tes-ES\nOla mundo\tpt-PT\n"
            "Bom dia mundo\tpt-PT\n";
  const std::string path = Path("hola.txt");
  std::ofstream(path) << corpus.str();
  ASSERT_EQ(RunCli({"train", "--model", "mnb", "--train", path, "--out",
                    Path("hola.model")})
                .code,
            0);
  const auto r = RunCli({"predict", "--model", Path("hola.model")},
                        "Hola mundo\n");
  EXPECT_EQ(r.out, "es-ES\n");
  const auto loaded = LoadModel(Path("hola.model"));
  const auto& m = dynamic_cast<const MnbClassifier&>(*loaded);
  const auto x = VectorizeCounts(NgramsUpTo("Hola mundo", m.spec()), m.vocab());
  const auto post = MnbLogPosterior(m.model(), x);
  EXPECT_GT(post[0], post[1]);
}

TEST_F(CliTest, EvaluateAgreesWithPredictPipeline) {
  ASSERT_EQ(RunCli({"train", "--model", "logreg", "--train", train_, "--out",
                    Path("lr"), "--seed", "3"})
                .code,
            0);
  const auto gold = ParseDslFile(test_, Registry::DslDefault());
  std::string input;
  for (const auto& s : gold.sentences()) input += s.text + "\n";
  const auto pred = RunCli({"predict", "--model", Path("lr")}, input);
  std::vector<std::string> labels;
  std::istringstream lines(pred.out);
  for (std::string l; std::getline(lines, l);) labels.push_back(l);
  const double acc = Accuracy(labels, Golds(gold));
  const auto ev = RunCli({"evaluate", "--model", Path("lr"), "--test", test_,
                          "--confusion", Path("conf.csv"), "--groups"});
  ASSERT_EQ(ev.code, 0) << ev.err;
  std::ostringstream expected;
  expected << "accuracy " << std::fixed << std::setprecision(4) << acc;
  EXPECT_EQ(ev.out.rfind(expected.str(), 0), 0u) << ev.out;
  EXPECT_EQ(testing::ReadFile(Path("conf.csv")).rfind("gold\\predicted,South", 0),
            0u);
}

TEST_F(CliTest, TrainIsDeterministicForEveryModelType) {
  for (const std::string kind : {"mnb", "logreg", "gru"}) {
    std::vector<std::string> args = {"train", "--model", kind, "--train",
                                     train_, "--seed", "17"};
    if (kind == "gru") {
      args.insert(args.end(), {"--ngram", "char:2-2", "--epochs", "2",
                               "--hidden", "8", "--embed-dim", "8"});
    }
    auto first = args;
    first.insert(first.end(), {"--out", Path(kind + ".1")});
    auto second = args;
    second.insert(second.end(), {"--out", Path(kind + ".2")});
    ASSERT_EQ(RunCli(first).code, 0);
    ASSERT_EQ(RunCli(second).code, 0);
    EXPECT_EQ(testing::ReadFile(Path(kind + ".1")),
              testing::ReadFile(Path(kind + ".2")))
        << kind;
  }
}

TEST_F(CliTest, HistoryCsvForGruAndLogReg) {
  ASSERT_EQ(RunCli({"train", "--model", "gru", "--ngram", "char:2-2",
                    "--train", train_, "--valid", test_, "--epochs", "3",
                    "--hidden", "8", "--out", Path("g"), "--history",
                    Path("g.csv")})
                .code,
            0);
  const auto csv = testing::ReadFile(Path("g.csv"));
  EXPECT_EQ(csv.rfind("epoch,train_acc,valid_acc\n1,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  ASSERT_EQ(RunCli({"train", "--model", "logreg", "--train", train_,
                    "--valid", test_, "--epochs", "4", "--out", Path("l"),
                    "--history", Path("l.csv")})
                .code,
            0);
  const auto lcsv = testing::ReadFile(Path("l.csv"));
  EXPECT_EQ(std::count(lcsv.begin(), lcsv.end(), '\n'), 5);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli({}).code, 2);
  EXPECT_EQ(RunCli({"frobnicate"}).code, 2);
  const auto r = RunCli({"train", "--model", "mnb", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(RunCli({"train", "--model", "svm", "--train", train_, "--out",
                    Path("x")})
                .code,
            2);
  EXPECT_EQ(RunCli({"--help"}).code, 0);
}

TEST_F(CliTest, DataErrorsExitOne) {
  const auto r = RunCli({"predict", "--model", Path("missing")}, "x\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("missing"), std::string::npos);
  EXPECT_EQ(RunCli({"train", "--model", "mnb", "--train", Path("nope.txt"),
                    "--out", Path("x")})
                .code,
            1);
  EXPECT_EQ(RunCli({"train", "--model", "mnb", "--ngram", "char:5-1",
                    "--train", train_, "--out", Path("x")})
                .code,
            1);
  ASSERT_EQ(RunCli({"train", "--model", "mnb", "--train", train_, "--out",
                    Path("m")})
                .code,
            0);
  EXPECT_EQ(RunCli({"predict", "--model", Path("m")}, "ok\n\xff\n").code, 1);
}

TEST_F(CliTest, OverlapExportAndSweep) {
  const std::string path = Path("ov.txt");
  std::ofstream(path) << "a b c d\tbs\na b\thr\n";
  auto r = RunCli({"overlap", "--corpus", path, "--source", "bs", "--target",
                   "hr"});
  EXPECT_EQ(r.out, "0.5000\n");
  r = RunCli({"export-vectors", "--corpus", path, "--ngram", "word:1-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  // Vocabulary by frequency: a, b (2 each), then c, d.
  EXPECT_EQ(r.out, "bs 1:1 2:1 3:1 4:1\nhr 1:1 2:1\n");
  r = RunCli({"sweep-ngrams", "--train", train_, "--valid", test_, "--unit",
              "word", "--n", "1-2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("n,accuracy\n1,", 0), 0u);
}

TEST_F(CliTest, StackPrefixScanAndGridSearch) {
  auto r = RunCli({"stack", "--train", train_, "--out", Path("ens"),
                   "--members", "char:2-2,word:1-1", "--epochs", "3",
                   "--hidden", "8", "--folds", "3", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(LoadModel(Path("ens"))->Kind(), "ensemble");
  r = RunCli({"prefix-scan", "--model", Path("ens"), "--sentence",
              "жаба ωμέγα"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  r = RunCli({"grid-search", "--devel", train_, "--ngram", "char:2-2",
              "--epochs-grid", "1", "--hidden-grid", "4,8", "--dropout-grid",
              "0.2", "--out", Path("grid.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("best epochs 1 hidden ", 0), 0u) << r.out;
}

TEST_F(CliTest, BenchExternalWithSubprocessAdapter) {
  const std::string gold = Path("gold.txt");
  std::ofstream(gold) << "pt-BR one\tpt-BR\npt-PT two\tpt-PT\nbs three\tbs\n"
                         "hr four\thr\n";
  const std::string policy = Path("policy.json");
  std::ofstream(policy) << R"js({"unsupported": ["bs"],
    "variety_insensitive_groups": ["Ibero-Romance (Portuguese)"]})js";
  const auto r = RunCli({"bench-external", "--gold", gold, "--adapter-cmd",
                         "awk '{print substr($1, 1, 2)}'", "--policy", policy});
  ASSERT_EQ(r.code, 0) << r.err;
  // pt, pt accepted; bs skipped; "hr" exact.
  EXPECT_EQ(r.out, "accuracy 1.0000 evaluated 3 skipped 1 missing 0\n");
  EXPECT_EQ(RunCli({"bench-external", "--gold", gold}).code, 2);
}

}  // namespace
}  // namespace lide
