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

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "apicomp/clusterer.hpp"
#include "apicomp/component.hpp"
#include "apicomp/errors.hpp"
#include "apicomp/graph_builder.hpp"
#include "apicomp/metrics.hpp"
#include "apicomp/pruner.hpp"
#include "apicomp/report.hpp"
#include "apicomp/trace_model.hpp"

namespace apicomp {

struct RunConfig {
  std::filesystem::path corpus;
  /// Empty: no prefixes, only per-line origin tokens mark API frames.
  std::filesystem::path classifier;
  QualityWeights weights;
  double edge_threshold = 0.0;
  WeightFormula weight_formula = WeightFormula::kExample;
  RcComparison rc_comparison = RcComparison::kProse;
  std::size_t distance_pair_cap = 10000;
  /// Empty: nothing is written.
  std::filesystem::path out;
  /// 0 = hardware concurrency. Output does not depend on it.
  std::size_t jobs = 1;

  GraphConfig graph_config() const {
    GraphConfig g;
    g.weights = weights;
    g.edge_threshold = edge_threshold;
    g.metrics.weight_formula = weight_formula;
    g.metrics.distance_pair_cap = distance_pair_cap;
    g.jobs = jobs;
    return g;
  }

  void validate() const {
    graph_config().validate();
    if (!std::filesystem::is_directory(corpus)) throw ConfigError("corpus directory not found: " + corpus.string());
    if (!classifier.empty() && !std::filesystem::is_regular_file(classifier)) {
      throw ConfigError("classifier file not found: " + classifier.string());
    }
  }

  ConfigEcho echo() const {
    ConfigEcho e;
    e.corpus = corpus.generic_string();
    e.classifier = classifier.generic_string();
    e.lambda_freq = weights.freq;
    e.lambda_dist = weights.dist;
    e.lambda_weight = weights.weight;
    e.edge_threshold = edge_threshold;
    e.weight_formula = weight_formula == WeightFormula::kExample ? "example" : "literal";
    e.rc_comparison = rc_comparison == RcComparison::kProse ? "prose" : "caption";
    e.distance_pair_cap = distance_pair_cap;
    return e;
  }
};

/// Everything one run produces; `report` is what gets written.
struct PipelineResult {
  ComponentReport report;
  TraceCorpus pruned;
  ApiGraph graph;
  std::vector<std::vector<MethodRef>> clusters;
  bool empty_corpus = false;
};

inline ApiClassifier load_classifier(const std::filesystem::path& path) {
  if (path.empty()) return {};
  return ApiClassifier::parse(detail::read_file(path));
}

/// Report for an already loaded raw corpus.
inline PipelineResult run_pipeline(const TraceCorpus& raw, const ApiClassifier& classifier,
                                   const RunConfig& cfg) {
  PipelineResult res;
  res.report.config = cfg.echo();
  const auto gcfg = cfg.graph_config();
  gcfg.validate();
  if (raw.empty()) {
    res.empty_corpus = true;
    return res;
  }
  const auto classified = classify(raw, classifier);
  res.pruned = prune(classified);

  auto& rep = res.report;
  rep.apps = classified.app_count();
  rep.trees = classified.tree_count();
  rep.raw_stats = corpus_stats(classified);
  rep.pruned_stats = corpus_stats(res.pruned);
  for (const auto& [app, trees] : classified.trees) {
    const auto& pruned_trees = res.pruned.trees.at(app);
    for (std::size_t i = 0; i < trees.size(); ++i) {
      rep.tree_stats.push_back({app, trees[i].scenario_id, tree_stats(trees[i]), tree_stats(pruned_trees[i])});
    }
  }

  const CorpusIndex index(res.pruned, gcfg.metrics);
  res.graph = build_graph(index, gcfg);
  rep.graph_vertices = res.graph.vertex_count();
  rep.graph_edges = res.graph.edge_count();

  ClusterConfig ccfg;
  ccfg.rc_comparison = cfg.rc_comparison;
  // Report order: clusters sorted by their text line (center first).
  std::vector<std::pair<std::string, std::vector<MethodRef>>> keyed;
  for (auto& c : cluster_methods(res.graph, cluster(res.graph, ccfg))) {
    auto key = write_clusters({c});
    keyed.emplace_back(std::move(key), std::move(c));
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [key, c] : keyed) res.clusters.push_back(std::move(c));
  rep.components = assemble(res.clusters, res.pruned);
  rep.component_stats = component_stats(rep.components);
  return res;
}

/// Loads, analyzes, and (when cfg.out is set) writes report.json,
/// report.txt, graph.tsv, graph.dot and clusters.txt.
inline PipelineResult run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  const auto raw = load_corpus(cfg.corpus, cfg.jobs);
  auto res = run_pipeline(raw, load_classifier(cfg.classifier), cfg);
  if (!cfg.out.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out);
    auto write = [&](const char* name, const std::string& text) {
      std::ofstream f(cfg.out / name, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + (cfg.out / name).string());
      f << text;
    };
    write("report.json", to_json_text(res.report));
    write("report.txt", to_text(res.report));
    write("graph.tsv", write_edge_list(res.graph));
    write("graph.dot", write_dot(res.graph));
    write("clusters.txt", write_clusters(res.clusters));
  }
  return res;
}

/// Per-component precision in report order and its mean (0 for no
/// components).
inline Evaluation evaluate(const ComponentReport& report, const RelatednessLabels& labels) {
  Evaluation e;
  for (const auto& c : report.components) e.precision.push_back(precision(c, labels));
  if (!e.precision.empty()) {
    double sum = 0.0;
    for (double p : e.precision) sum += p;
    e.mean = sum / static_cast<double>(e.precision.size());
  }
  return e;
}

}  // namespace apicomp
