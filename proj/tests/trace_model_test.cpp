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

#include "apicomp/trace_model.hpp"

#include <random>
#include <string>

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "oracle.hpp"

namespace apicomp {
namespace {

using fixtures::api;
using fixtures::app;

TEST(MethodRefTest, SplitsAtLastDot) {
  const auto m = MethodRef::parse("org.acme.Log.info");
  EXPECT_EQ(m.class_name, "org.acme.Log");
  EXPECT_EQ(m.method_name, "info");
  EXPECT_EQ(m.qualified(), "org.acme.Log.info");
}

TEST(MethodRefTest, RejectsUnqualifiedNames) {
  EXPECT_FALSE(MethodRef::try_parse("main"));
  EXPECT_FALSE(MethodRef::try_parse(".main"));
  EXPECT_FALSE(MethodRef::try_parse("Log."));
  EXPECT_THROW(MethodRef("", "x"), ArgumentError);
}

TEST(ParseTraceTest, TwoLineNesting) {
  const auto t = parse_trace("0\ta.App.main\n1\tapi.Log.info", "a", "s");
  ASSERT_EQ(t.nodes.size(), 2u);
  EXPECT_EQ(t.root().method, MethodRef("a.App", "main"));
  ASSERT_EQ(t.root().children.size(), 1u);
  EXPECT_EQ(t.nodes[t.root().children[0]].method, MethodRef("api.Log", "info"));
  EXPECT_EQ(t.root().origin, Origin::kApplication);
}

TEST(ParseTraceTest, DepthJumpNamesLine) {
  try {
    parse_trace("0\ta.App.main\n2\tapi.Log.info", "a", "s");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseTraceTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_trace("", "a", "s"), ParseError);
  EXPECT_THROW(parse_trace("# only a comment\n", "a", "s"), ParseError);
  EXPECT_THROW(parse_trace("1\ta.App.main\n", "a", "s"), ParseError);
  EXPECT_THROW(parse_trace("0\ta.App.main\n0\ta.App.other\n", "a", "s"), ParseError);
  EXPECT_THROW(parse_trace("x\ta.App.main\n", "a", "s"), ParseError);
  EXPECT_THROW(parse_trace("0\tmain\n", "a", "s"), ParseError);
  EXPECT_THROW(parse_trace("0\ta.App.main\tLIB\n", "a", "s"), ParseError);
  EXPECT_THROW(parse_trace("0\ta.App.main\n1\t<connector>\n", "a", "s"), ParseError);
}

TEST(ParseTraceTest, CommentsBlankLinesAndCrlf) {
  const auto t = parse_trace("# header\r\n0\ta.App.main\r\n\r\n1\tapi.Log.info\tAPI\r\n", "a", "s");
  ASSERT_EQ(t.nodes.size(), 2u);
  EXPECT_EQ(t.nodes[1].override_origin, OriginOverride::kApi);
}

TEST(ParseTraceTest, ScenarioFixtureShape) {
  // 21 frames, height 5 (independently counted from the fixture text).
  const auto t = fixtures::scenario_tree();
  EXPECT_EQ(t.nodes.size(), 21u);
  EXPECT_EQ(t.depth(), 5u);
  EXPECT_EQ(t.edge_count(), 20u);
}

TEST(ClassifyTest, PrefixMatching) {
  const ApiClassifier c{{"api."}};
  const auto t = classify(parse_trace("0\ta.App.main\n1\tapi.Log.info\n", "a", "s"), c);
  EXPECT_EQ(t.nodes[0].origin, Origin::kApplication);
  EXPECT_EQ(t.nodes[1].origin, Origin::kApi);
}

TEST(ClassifyTest, EmptyPrefixListMakesEverythingApplication) {
  const auto t = classify(fixtures::scenario_tree(), ApiClassifier{});
  for (const auto& n : t.nodes) EXPECT_EQ(n.origin, Origin::kApplication);
}

TEST(ClassifyTest, OverrideTokensWin) {
  const ApiClassifier c{{"api."}};
  const auto t = classify(parse_trace("0\ta.App.main\tAPI\n1\tapi.Log.info\tAPP\n", "a", "s"), c);
  EXPECT_EQ(t.nodes[0].origin, Origin::kApi);
  EXPECT_EQ(t.nodes[1].origin, Origin::kApplication);
}

TEST(ClassifyTest, IdempotentAndShapePreserving) {
  const auto once = fixtures::scenario_tree();
  const auto twice = classify(once, fixtures::classifier());
  EXPECT_EQ(once, twice);
  const auto raw = parse_trace(fixtures::kScenarioTrace, "client", "scenario");
  ASSERT_EQ(raw.nodes.size(), once.nodes.size());
  for (std::size_t i = 0; i < raw.nodes.size(); ++i) EXPECT_EQ(raw.nodes[i].children, once.nodes[i].children);
}

TEST(ClassifierFileTest, ParsesPrefixesAndComments) {
  const auto c = ApiClassifier::parse("# api packages\norg.apache.\n\n  java.util. \n");
  ASSERT_EQ(c.api_prefixes.size(), 2u);
  EXPECT_EQ(c.api_prefixes[1], "java.util.");
  EXPECT_TRUE(c.is_api(MethodRef("java.util.List", "add")));
  EXPECT_FALSE(c.is_api(MethodRef("java.utility.X", "y")));
}

TEST(TreeStatsTest, SingleApiNode) {
  const auto t = classify(parse_trace("0\tapi.Log.info\n", "a", "s"), fixtures::classifier());
  EXPECT_EQ(tree_stats(t), (TraceStats{1, 1, 0, 1, 1, 1.0}));
}

TEST(TreeStatsTest, ScenarioFixture) {
  // F x4, B x3, G x2, K x2, H x1, L x1 over 13 API frames.
  const auto s = tree_stats(fixtures::scenario_tree());
  EXPECT_EQ(s.nodes, 21u);
  EXPECT_EQ(s.unique_api_methods, 6u);
  EXPECT_EQ(s.height, 5u);
  EXPECT_EQ(s.min_repetition, 1u);
  EXPECT_EQ(s.max_repetition, 4u);
  EXPECT_DOUBLE_EQ(s.avg_repetition, 13.0 / 6.0);
}

TEST(TreeStatsTest, NoApiFrames) {
  const auto s = tree_stats(classify(parse_trace("0\ta.App.main\n", "a", "s"), fixtures::classifier()));
  EXPECT_EQ(s, (TraceStats{1, 0, 0, 0, 0, 0.0}));
}

// Random trees: serialization round trip, edge/node identity, height bound,
// and average repetition against a direct recount.
TEST(TraceModelProperty, RandomTrees) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> apis = {"api.X.a", "api.X.b", "api.Y.c", "api.Y.d"};
  const std::vector<std::string> apps = {"app.M.main", "app.M.run"};
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = 1 + rng() % 30;
    const auto nested = oracle::random_tree(rng, n, apis, apps, 0.3);
    const auto text = oracle::to_trace(nested);
    const auto t = classify(parse_trace(text, "a", "s"), fixtures::classifier());
    ASSERT_EQ(t.nodes.size(), n);
    EXPECT_EQ(t.edge_count(), t.nodes.size() - 1);
    EXPECT_LE(t.depth(), t.nodes.size() - 1);
    EXPECT_EQ(t.depth(), oracle::height(nested));

    const auto again = classify(parse_trace(serialize_trace(t), "a", "s"), fixtures::classifier());
    EXPECT_EQ(t, again);

    std::size_t api_frames = 0;
    std::set<MethodRef> distinct;
    for (const auto& node : t.nodes) {
      if (node.is_api()) {
        ++api_frames;
        distinct.insert(node.method);
      }
    }
    const auto s = tree_stats(t);
    EXPECT_EQ(s.unique_api_methods, distinct.size());
    if (!distinct.empty()) {
      EXPECT_DOUBLE_EQ(s.avg_repetition, static_cast<double>(api_frames) / static_cast<double>(distinct.size()));
    }
  }
}

TEST(CorpusIoTest, LoadsLayoutAndSkipsEmptyApps) {
  const auto dir = fixtures::temp_dir("corpus_io");
  fixtures::write_file(dir / "beta" / "s2.trace", "0\tapi.Lib.B\n");
  fixtures::write_file(dir / "beta" / "s1.trace", "0\tapi.Lib.A\n1\tapi.Lib.B\n");
  fixtures::write_file(dir / "alpha" / "only.trace", "0\tapp.Client.main\n");
  fixtures::write_file(dir / "alpha" / "notes.txt", "ignored");
  std::filesystem::create_directories(dir / "empty");
  fixtures::write_file(dir / "ground_truth.txt", "ignored");

  for (std::size_t jobs : {1u, 4u}) {
    const auto corpus = load_corpus(dir, jobs);
    ASSERT_EQ(corpus.app_count(), 2u);
    const auto& beta = corpus.trees.at("beta");
    ASSERT_EQ(beta.size(), 2u);
    EXPECT_EQ(beta[0].scenario_id, "s1");
    EXPECT_EQ(beta[1].scenario_id, "s2");
    EXPECT_EQ(beta[0].app_id, "beta");
  }

  const auto out = fixtures::temp_dir("corpus_io_out");
  write_corpus(out, load_corpus(dir));
  EXPECT_EQ(fixtures::read_file(out / "beta" / "s1.trace"), "0\tapi.Lib.A\n1\tapi.Lib.B\n");
}

TEST(CorpusIoTest, ParseErrorNamesFileAndLine) {
  const auto dir = fixtures::temp_dir("corpus_bad");
  fixtures::write_file(dir / "app" / "bad.trace", "0\ta.App.main\n1\tapi.L.x\n3\tapi.L.y\n");
  try {
    load_corpus(dir);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("bad.trace"), std::string::npos);
  }
}

TEST(CorpusIoTest, MissingDirectory) {
  EXPECT_THROW(load_corpus("/nonexistent/apicomp/corpus"), ConfigError);
}

}  // namespace
}  // namespace apicomp
