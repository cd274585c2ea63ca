// Copyright 2026 The apicomp Authors
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

// Drives the built binary through std::system.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace apicomp {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() / "apicomp_cli_io";
  std::filesystem::create_directories(dir);
  const auto out = dir / ("out" + std::to_string(counter) + ".txt");
  const auto err = dir / ("err" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(APICOMP_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, fixtures::read_file(out), fixtures::read_file(err)};
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fixtures::temp_dir(std::string("cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fixtures::write_file(dir_ / "scenario" / "client" / "main.trace", fixtures::kScenarioTrace);
    fixtures::write_file(dir_ / "classifier.txt", "api.\n");
  }
  std::filesystem::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("run --out " + q(dir_ / "o")).code, 1);
  EXPECT_EQ(cli("--help").code, 0);
  const std::string base = "run --corpus " + q(dir_ / "scenario") + " --out " + q(dir_ / "o");
  EXPECT_EQ(cli(base + " --weight-formula median").code, 1);
  EXPECT_EQ(cli(base + " --rc-comparison both").code, 1);
  EXPECT_EQ(cli(base + " --edge-threshold 1").code, 1);
  EXPECT_EQ(cli(base + " --lambda-freq 0 --lambda-dist 0 --lambda-weight 0").code, 1);
  EXPECT_EQ(cli(base + " --lambda-freq 2").code, 1);
  EXPECT_EQ(cli("run --corpus " + q(dir_ / "missing") + " --out " + q(dir_ / "o")).code, 1);
  EXPECT_EQ(cli("generate --out " + q(dir_ / "g") + " --depth-min 4 --depth-max 2").code, 1);
}

TEST_F(CliTest, ParseErrorNamesFileAndLine) {
  fixtures::write_file(dir_ / "bad" / "app" / "broken.trace", "0\ta.App.main\n2\tapi.X.y\n");
  const auto r = cli("run --corpus " + q(dir_ / "bad") + " --out " + q(dir_ / "o"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("broken.trace"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find(":2"), std::string::npos) << r.err;
}

TEST_F(CliTest, EmptyCorpus) {
  std::filesystem::create_directories(dir_ / "empty");
  const auto r = cli("run --corpus " + q(dir_ / "empty") + " --out " + q(dir_ / "o"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("(no components)"), std::string::npos);
  EXPECT_TRUE(std::filesystem::is_regular_file(dir_ / "o" / "report.json"));
  EXPECT_EQ(cli("prune --corpus " + q(dir_ / "empty") + " --out " + q(dir_ / "p")).code, 3);
  EXPECT_EQ(cli("graph --corpus " + q(dir_ / "empty") + " --out " + q(dir_ / "p")).code, 3);
}

TEST_F(CliTest, RunReportsPrunedScenario) {
  const auto r = cli("run --corpus " + q(dir_ / "scenario") + " --classifier " + q(dir_ / "classifier.txt") +
                     " --out " + q(dir_ / "o"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("raw\t21\t6\t5"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("pruned\t13\t6\t3"), std::string::npos) << r.out;
  EXPECT_EQ(fixtures::read_file(dir_ / "o" / "report.txt"), r.out);
}

TEST_F(CliTest, RunIsByteDeterministic) {
  ASSERT_EQ(cli("generate --out " + q(dir_ / "syn") + " --components 3 --noise-prob 0.3 --seed 5").code, 0);
  const std::string base = "run --corpus " + q(dir_ / "syn") + " --classifier " + q(dir_ / "syn" / "classifier.txt");
  ASSERT_EQ(cli(base + " --out " + q(dir_ / "a")).code, 0);
  ASSERT_EQ(cli(base + " --jobs 0 --out " + q(dir_ / "b")).code, 0);
  for (const char* f : {"report.json", "report.txt", "graph.tsv", "clusters.txt"}) {
    EXPECT_EQ(fixtures::read_file(dir_ / "a" / f), fixtures::read_file(dir_ / "b" / f)) << f;
  }
}

// generate -> prune -> graph -> cluster, each stage reading the previous
// stage's files, agrees with the one-shot run.
TEST_F(CliTest, StagesCompose) {
  ASSERT_EQ(cli("generate --out " + q(dir_ / "syn") + " --components 2 --seed 3").code, 0);
  ASSERT_TRUE(std::filesystem::is_regular_file(dir_ / "syn" / "ground_truth.txt"));
  const std::string cls = " --classifier " + q(dir_ / "syn" / "classifier.txt");
  ASSERT_EQ(cli("prune --corpus " + q(dir_ / "syn") + cls + " --out " + q(dir_ / "pruned")).code, 0);
  // The pruned corpus carries explicit origin tokens: no classifier needed.
  ASSERT_EQ(cli("graph --corpus " + q(dir_ / "pruned") + " --out " + q(dir_ / "g")).code, 0);
  ASSERT_EQ(cli("cluster --graph " + q(dir_ / "g" / "graph.tsv") + " --out " + q(dir_ / "clusters.txt")).code, 0);
  ASSERT_EQ(cli("run --corpus " + q(dir_ / "syn") + cls + " --out " + q(dir_ / "run")).code, 0);
  EXPECT_EQ(fixtures::read_file(dir_ / "g" / "graph.tsv"), fixtures::read_file(dir_ / "run" / "graph.tsv"));
  EXPECT_EQ(fixtures::read_file(dir_ / "clusters.txt"), fixtures::read_file(dir_ / "run" / "clusters.txt"));
  const auto clusters = fixtures::read_file(dir_ / "clusters.txt");
  EXPECT_EQ(std::count(clusters.begin(), clusters.end(), '\n'), 2);

  // Cluster lines double as metric sets.
  const auto m = cli("metrics --corpus " + q(dir_ / "pruned") + " --sets " + q(dir_ / "clusters.txt"));
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(m.out.rfind("set,call_freq,call_dist,call_weight,quality\n", 0), 0u);
  EXPECT_EQ(std::count(m.out.begin(), m.out.end(), '\n'), 3);
  EXPECT_NE(m.out.find("\"api.c"), std::string::npos);
}

TEST_F(CliTest, MetricsOnThreeTrees) {
  for (int i = 0; i < 3; ++i) {
    fixtures::write_file(dir_ / "fig" / "app" / ("t" + std::to_string(i + 1) + ".trace"), fixtures::kThreeTrees[i]);
  }
  fixtures::write_file(dir_ / "sets.txt", "api.Lib.D,api.Lib.E\n");
  const std::string base = "metrics --corpus " + q(dir_ / "fig") + " --classifier " + q(dir_ / "classifier.txt") +
                           " --sets " + q(dir_ / "sets.txt") + " --lambda-freq 0 --lambda-dist 0";
  auto r = cli(base);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(",0.6\n"), std::string::npos) << r.out;
  r = cli(base + " --weight-formula literal");
  EXPECT_NE(r.out.find(",1.2\n"), std::string::npos) << r.out;

  fixtures::write_file(dir_ / "bad_sets.txt", "api.Lib.D\n");
  EXPECT_EQ(cli("metrics --corpus " + q(dir_ / "fig") + " --sets " + q(dir_ / "bad_sets.txt")).code, 1);
  fixtures::write_file(dir_ / "bad_sets.txt", "nodot,api.Lib.D\n");
  EXPECT_EQ(cli("metrics --corpus " + q(dir_ / "fig") + " --sets " + q(dir_ / "bad_sets.txt")).code, 2);
}

TEST_F(CliTest, EvaluateWritesPrecision) {
  ASSERT_EQ(cli("generate --out " + q(dir_ / "syn") + " --components 2 --seed 4").code, 0);
  ASSERT_EQ(cli("run --corpus " + q(dir_ / "syn") + " --classifier " + q(dir_ / "syn" / "classifier.txt") +
                " --out " + q(dir_ / "run"))
                .code,
            0);
  // Label every ground-truth component as mutually related.
  std::string labels;
  std::istringstream gt(fixtures::read_file(dir_ / "syn" / "ground_truth.txt"));
  std::string line;
  while (std::getline(gt, line)) {
    std::vector<std::string> ms;
    std::stringstream ss(line);
    std::string m;
    while (std::getline(ss, m, ',')) ms.push_back(m);
    for (std::size_t i = 1; i < ms.size(); ++i) labels += ms[0] + "\t" + ms[i] + "\n";
  }
  fixtures::write_file(dir_ / "labels.txt", labels);
  const auto r = cli("evaluate --report " + q(dir_ / "run" / "report.json") + " --labels " + q(dir_ / "labels.txt") +
                     " --out " + q(dir_ / "eval"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mean\t1.0000"), std::string::npos) << r.out;
  EXPECT_NE(fixtures::read_file(dir_ / "eval" / "report.json").find("\"evaluation\""), std::string::npos);
  EXPECT_TRUE(std::filesystem::is_regular_file(dir_ / "eval" / "evaluation.txt"));

  fixtures::write_file(dir_ / "broken.json", "{not json");
  EXPECT_EQ(cli("evaluate --report " + q(dir_ / "broken.json") + " --labels " + q(dir_ / "labels.txt")).code, 2);
  fixtures::write_file(dir_ / "bad_labels.txt", "onlyone\n");
  EXPECT_EQ(cli("evaluate --report " + q(dir_ / "run" / "report.json") + " --labels " + q(dir_ / "bad_labels.txt") +
                " --out " + q(dir_ / "eval"))
                .code,
            2);
}

}  // namespace
}  // namespace apicomp
