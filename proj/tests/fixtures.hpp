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

// Hand-encoded trace fixtures shared by the unit and acceptance suites.

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "apicomp/component.hpp"
#include "apicomp/pruner.hpp"
#include "apicomp/trace_model.hpp"

namespace apicomp::fixtures {

inline MethodRef api(const std::string& m) { return MethodRef("api.Lib", m); }
inline MethodRef app(const std::string& m) { return MethodRef("app.Client", m); }

inline const ApiClassifier& classifier() {
  static const ApiClassifier c{{"api."}};
  return c;
}

// Usage scenario with application methods A, C, D, E and API methods
// B, F, G, H, K, L: 21 frames (8 application, 13 API), height 5.
//
//   A
//   +- B (F, G (H, K), F)
//   +- C
//   |  +- F
//   |  +- E (F, D (B (G)))
//   |  +- D
//   +- D
//      +- L (K)
//      +- C (E (B))
inline constexpr const char* kScenarioTrace =
    "0\tapp.Client.A\n"
    "1\tapi.Lib.B\n"
    "2\tapi.Lib.F\n"
    "2\tapi.Lib.G\n"
    "3\tapi.Lib.H\n"
    "3\tapi.Lib.K\n"
    "2\tapi.Lib.F\n"
    "1\tapp.Client.C\n"
    "2\tapi.Lib.F\n"
    "2\tapp.Client.E\n"
    "3\tapi.Lib.F\n"
    "3\tapp.Client.D\n"
    "4\tapi.Lib.B\n"
    "5\tapi.Lib.G\n"
    "2\tapp.Client.D\n"
    "1\tapp.Client.D\n"
    "2\tapi.Lib.L\n"
    "3\tapi.Lib.K\n"
    "2\tapp.Client.C\n"
    "3\tapp.Client.E\n"
    "4\tapi.Lib.B\n";

inline CallTree scenario_tree() {
  return classify(parse_trace(kScenarioTrace, "client", "scenario"), classifier());
}

// Its pruned form (connector root, 13 API frames, height 3):
//
//   <connector>
//   +- B (F, G (H, K), F)
//   +- F
//   +- F
//   +- B (G)
//   +- L (K)
//   +- B
inline constexpr const char* kPrunedScenarioTrace =
    "0\t<connector>\n"
    "1\tapi.Lib.B\tAPI\n"
    "2\tapi.Lib.F\tAPI\n"
    "2\tapi.Lib.G\tAPI\n"
    "3\tapi.Lib.H\tAPI\n"
    "3\tapi.Lib.K\tAPI\n"
    "2\tapi.Lib.F\tAPI\n"
    "1\tapi.Lib.F\tAPI\n"
    "1\tapi.Lib.F\tAPI\n"
    "1\tapi.Lib.B\tAPI\n"
    "2\tapi.Lib.G\tAPI\n"
    "1\tapi.Lib.L\tAPI\n"
    "2\tapi.Lib.K\tAPI\n"
    "1\tapi.Lib.B\tAPI\n";

// Three API call trees of one application:
//   (1) A (B (D (E)), C (F))    A-B = 1, A-E = 3, one D-E call of 5 edges
//   (2) A (B, L)
//   (3) D (E)               one D-E call of 1 edge
inline constexpr const char* kThreeTrees[] = {
    "0\tapi.Lib.A\n1\tapi.Lib.B\n2\tapi.Lib.D\n3\tapi.Lib.E\n1\tapi.Lib.C\n2\tapi.Lib.F\n",
    "0\tapi.Lib.A\n1\tapi.Lib.B\n1\tapi.Lib.L\n",
    "0\tapi.Lib.D\n1\tapi.Lib.E\n",
};

inline TraceCorpus three_tree_corpus() {
  TraceCorpus corpus;
  for (int i = 0; i < 3; ++i) {
    corpus.add(parse_trace(kThreeTrees[i], "app", "t" + std::to_string(i + 1)));
  }
  return prune(classify(std::move(corpus), classifier()));
}

// Precision fixture: a 14-method interface over 11 classes. Classes
// lib.R0..R6 hold 10 methods (R0..R2 two each) that are labelled mutually
// related; helper classes lib.H0..H3 hold one method each and are only
// related to methods outside the interface. Hand count: 10 of 14.
struct PrecisionFixture {
  std::set<MethodRef> interface_methods;
  RelatednessLabels labels;
};

inline PrecisionFixture precision_fixture() {
  PrecisionFixture f;
  std::vector<MethodRef> related;
  for (int c = 0; c < 7; ++c) {
    const std::string cls = "lib.R" + std::to_string(c);
    related.emplace_back(cls, "run");
    if (c < 3) related.emplace_back(cls, "stop");
  }
  f.interface_methods.insert(related.begin(), related.end());
  for (std::size_t i = 0; i < related.size(); ++i) {
    for (std::size_t j = i + 1; j < related.size(); ++j) f.labels.relate(related[i], related[j]);
  }
  for (int h = 0; h < 4; ++h) {
    const MethodRef helper("lib.H" + std::to_string(h), "help");
    f.interface_methods.insert(helper);
    f.labels.relate(helper, MethodRef("lib.Outside", "m" + std::to_string(h)));
  }
  return f;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("apicomp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& path) { return detail::read_file(path); }

}  // namespace apicomp::fixtures
