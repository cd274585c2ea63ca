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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apicomp/errors.hpp"
#include "apicomp/method_ref.hpp"
#include "apicomp/metrics.hpp"
#include "apicomp/parallel.hpp"
#include "apicomp/trace_model.hpp"

namespace apicomp {

struct GraphConfig {
  QualityWeights weights;
  /// Edges with quality below this are dropped. In [0,1).
  double edge_threshold = 0.0;
  MetricsOptions metrics;
  /// Worker threads for edge weights; 0 = hardware concurrency.
  std::size_t jobs = 1;

  void validate() const {
    weights.validate();
    if (!(edge_threshold >= 0.0 && edge_threshold < 1.0)) {
      throw ConfigError("edge threshold must lie in [0,1)");
    }
  }
};

/// Undirected weighted graph over API methods. Vertices are kept in
/// lexicographic MethodRef order and addressed by index; adjacency lists are
/// sorted by neighbor index.
class ApiGraph {
 public:
  struct Edge {
    std::size_t u;
    std::size_t v;
    double weight;
  };

  ApiGraph() = default;

  explicit ApiGraph(std::vector<MethodRef> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    adjacency_.resize(vertices_.size());
  }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  const std::vector<MethodRef>& vertices() const noexcept { return vertices_; }
  const MethodRef& vertex(std::size_t i) const { return vertices_.at(i); }

  std::optional<std::size_t> find(const MethodRef& m) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), m);
    if (it == vertices_.end() || *it != m) return std::nullopt;
    return static_cast<std::size_t>(it - vertices_.begin());
  }

  void add_edge(std::size_t u, std::size_t v, double weight) {
    if (u == v) throw ArgumentError("self-loop on " + vertex(u).qualified());
    if (edge_weight(u, v)) {
      throw ArgumentError("duplicate edge " + vertex(u).qualified() + " " + vertex(v).qualified());
    }
    insert_sorted(adjacency_.at(u), v, weight);
    insert_sorted(adjacency_.at(v), u, weight);
    ++edge_count_;
  }

  const std::vector<std::pair<std::size_t, double>>& neighbors(std::size_t v) const {
    return adjacency_.at(v);
  }

  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::optional<double> edge_weight(std::size_t u, std::size_t v) const {
    const auto& adj = adjacency_.at(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const auto& e, std::size_t x) { return e.first < x; });
    if (it == adj.end() || it->first != v) return std::nullopt;
    return it->second;
  }

  /// Every edge once, u < v, ordered by (u, v).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      for (const auto& [v, w] : adjacency_[u]) {
        if (u < v) out.push_back({u, v, w});
      }
    }
    return out;
  }

 private:
  static void insert_sorted(std::vector<std::pair<std::size_t, double>>& adj, std::size_t v, double w) {
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const auto& e, std::size_t x) { return e.first < x; });
    adj.insert(it, {v, w});
  }

  std::vector<MethodRef> vertices_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Builds the API graph from a pruned corpus. Only pairs that share at least
/// one tree are scored; a pair's edge weight is the quality of the pair.
inline ApiGraph build_graph(const CorpusIndex& index, const GraphConfig& cfg) {
  cfg.validate();
  ApiGraph graph(index.methods());  // already sorted, ids == vertex indices

  std::set<std::uint64_t> candidates;
  for (const auto& trees : index.apps()) {
    for (const auto& t : trees) {
      const auto ms = t.methods();
      for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t j = i + 1; j < ms.size(); ++j) candidates.insert(IndexedTree::pair_key(ms[i], ms[j]));
      }
    }
  }
  const std::vector<std::uint64_t> pairs(candidates.begin(), candidates.end());
  std::vector<double> weights(pairs.size());
  parallel_for(pairs.size(), cfg.jobs, [&](std::size_t k) {
    const auto a = static_cast<MethodId>(pairs[k] >> 32);
    const auto b = static_cast<MethodId>(pairs[k] & 0xffffffffULL);
    const auto p = pair_affinity(a, b, index);
    weights[k] = combine(p.frequency(), p.distance, p.weight, cfg.weights);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (weights[k] >= cfg.edge_threshold) {
      graph.add_edge(static_cast<std::size_t>(pairs[k] >> 32),
                     static_cast<std::size_t>(pairs[k] & 0xffffffffULL), weights[k]);
    }
  }
  return graph;
}

inline ApiGraph build_graph(const TraceCorpus& pruned, const GraphConfig& cfg) {
  cfg.validate();
  return build_graph(CorpusIndex(pruned, cfg.metrics), cfg);
}

// ---------------------------------------------------------------------------
// Text formats

/// Shortest text that reads back to the same double.
inline std::string format_weight(double w) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, w);
    if (std::strtod(buf, nullptr) == w) break;
  }
  return buf;
}

/// Edge list: "u TAB v TAB weight" per edge with u < v by qualified name,
/// lines sorted; then one line per isolated vertex, sorted.
inline std::string write_edge_list(const ApiGraph& g) {
  std::vector<std::string> edge_lines;
  for (const auto& e : g.edges()) {
    auto a = g.vertex(e.u).qualified();
    auto b = g.vertex(e.v).qualified();
    if (b < a) std::swap(a, b);
    edge_lines.push_back(a + "\t" + b + "\t" + format_weight(e.weight));
  }
  std::sort(edge_lines.begin(), edge_lines.end());
  std::vector<std::string> isolated;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 0) isolated.push_back(g.vertex(v).qualified());
  }
  std::sort(isolated.begin(), isolated.end());
  std::string out;
  for (const auto& l : edge_lines) out += l + "\n";
  for (const auto& l : isolated) out += l + "\n";
  return out;
}

inline ApiGraph read_edge_list(std::string_view text, const std::string& source = "<string>") {
  struct Row {
    MethodRef u, v;
    double w;
  };
  std::vector<Row> rows;
  std::vector<MethodRef> vertices;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto method = [&](std::string_view s) {
    auto m = MethodRef::try_parse(s);
    if (!m) throw ParseError(source, line_no, "invalid method '" + std::string(s) + "'");
    return *m;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto f = detail::split_tabs(line);
    if (f.size() == 1) {
      vertices.push_back(method(f[0]));
    } else if (f.size() == 3) {
      Row r{method(f[0]), method(f[1]), 0.0};
      const std::string w(f[2]);
      char* end = nullptr;
      r.w = std::strtod(w.c_str(), &end);
      if (w.empty() || end != w.c_str() + w.size() || !std::isfinite(r.w) || r.w < 0.0) {
        throw ParseError(source, line_no, "invalid weight '" + w + "'");
      }
      if (r.u == r.v) throw ParseError(source, line_no, "self-loop");
      vertices.push_back(r.u);
      vertices.push_back(r.v);
      rows.push_back(std::move(r));
    } else {
      throw ParseError(source, line_no, "expected 'u\\tv\\tweight' or a single vertex");
    }
  }
  ApiGraph g(std::move(vertices));
  // line numbers are lost past this point; duplicates are reported by name
  for (const auto& r : rows) {
    try {
      g.add_edge(*g.find(r.u), *g.find(r.v), r.w);
    } catch (const ArgumentError& e) {
      throw ParseError(source, 0, e.what());
    }
  }
  return g;
}

/// Graphviz rendering; edges labelled with their weight.
inline std::string write_dot(const ApiGraph& g) {
  std::string out = "graph api {\n";
  for (const auto& v : g.vertices()) out += "  \"" + v.qualified() + "\";\n";
  for (const auto& e : g.edges()) {
    char label[32];
    std::snprintf(label, sizeof label, "%.4f", e.weight);
    out += "  \"" + g.vertex(e.u).qualified() + "\" -- \"" + g.vertex(e.v).qualified() +
           "\" [weight=" + format_weight(e.weight) + ", label=\"" + label + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace apicomp
