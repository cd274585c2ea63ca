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

// Overlapping clustering by weighted star subgraphs.
//
// A star is a center vertex plus its neighbors (satellites). Clustering runs
// in two greedy passes:
//
//  1. initial_clusters: vertices are ranked once by RQ = (RD + RC) / 2 and
//     scanned in that order; a vertex becomes a center if it, or any of its
//     satellites, is still uncovered.
//  2. refine_clusters: centers are scanned by decreasing degree; a center
//     that is itself a satellite of another star and shares more than half
//     of its satellites with other stars is merged into the current star.
//
// Ties: RQ ties go to the higher degree, then the lexicographically smaller
// method; degree ties in refinement go to the smaller method. Vertex indices
// of ApiGraph are already in lexicographic order.

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "apicomp/errors.hpp"
#include "apicomp/graph_builder.hpp"
#include "apicomp/method_ref.hpp"

namespace apicomp {

/// How relative compactness compares a satellite's star with the center's.
/// kProse counts satellites whose star has strictly lower quality; kCaption
/// counts those with strictly greater quality.
enum class RcComparison { kProse, kCaption };

struct ClusterConfig {
  RcComparison rc_comparison = RcComparison::kProse;
};

/// Weighted star subgraph: center plus satellites (sorted vertex indices).
struct WsGraph {
  std::size_t center = 0;
  std::vector<std::size_t> satellites;
};

inline WsGraph star(const ApiGraph& g, std::size_t center) {
  WsGraph s{center, {}};
  for (const auto& [u, w] : g.neighbors(center)) s.satellites.push_back(u);
  return s;
}

/// Mean edge weight over all unordered vertex pairs of the star, absent
/// edges counting 0. A star without satellites has quality 0.
inline double ws_quality(const WsGraph& s, const ApiGraph& g) {
  if (s.satellites.empty()) return 0.0;
  std::vector<std::size_t> members = s.satellites;
  members.push_back(s.center);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  double sum = 0.0;
  for (std::size_t u : members) {
    for (const auto& [v, w] : g.neighbors(u)) {
      if (u < v && std::binary_search(members.begin(), members.end(), v)) sum += w;
    }
  }
  const double n = static_cast<double>(members.size());
  return sum / (n * (n - 1.0) / 2.0);
}

/// Centers chosen so far and which vertices their stars cover.
struct CoverState {
  std::vector<bool> covered;
  /// Chosen centers in selection order.
  std::vector<std::size_t> centers;

  explicit CoverState(std::size_t vertex_count = 0) : covered(vertex_count, false) {}

  bool is_center(std::size_t v) const {
    return std::find(centers.begin(), centers.end(), v) != centers.end();
  }

  void choose(std::size_t v, const ApiGraph& g) {
    centers.push_back(v);
    covered[v] = true;
    for (const auto& [u, w] : g.neighbors(v)) covered[u] = true;
  }

  bool covers_all() const { return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }); }
};

/// Share of v's satellites not yet covered; 0 for an isolated vertex.
inline double relative_density(std::size_t v, const CoverState& state, const ApiGraph& g) {
  const auto& adj = g.neighbors(v);
  if (adj.empty()) return 0.0;
  std::size_t uncovered = 0;
  for (const auto& [u, w] : adj) uncovered += state.covered[u] ? 0 : 1;
  return static_cast<double>(uncovered) / static_cast<double>(adj.size());
}

namespace detail {

inline std::vector<double> star_qualities(const ApiGraph& g) {
  std::vector<double> q(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) q[v] = ws_quality(star(g, v), g);
  return q;
}

inline double relative_compactness(std::size_t v, const ApiGraph& g, const std::vector<double>& q,
                                   RcComparison cmp) {
  const auto& adj = g.neighbors(v);
  if (adj.empty()) return 0.0;
  std::size_t count = 0;
  for (const auto& [s, w] : adj) {
    const bool hit = cmp == RcComparison::kProse ? q[s] < q[v] : q[s] > q[v];
    count += hit ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(adj.size());
}

}  // namespace detail

/// Share of v's satellites whose own star compares against v's star per
/// `cmp`; 0 for an isolated vertex.
inline double relative_compactness(std::size_t v, const ApiGraph& g,
                                   RcComparison cmp = RcComparison::kProse) {
  const auto& adj = g.neighbors(v);
  if (adj.empty()) return 0.0;
  const double qv = ws_quality(star(g, v), g);
  std::size_t count = 0;
  for (const auto& [s, w] : adj) {
    const double qs = ws_quality(star(g, s), g);
    count += (cmp == RcComparison::kProse ? qs < qv : qs > qv) ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(adj.size());
}

/// Vertices in scan order for the first pass: RQ against the empty cover,
/// descending, then degree descending, then vertex index.
inline std::vector<std::size_t> rank_vertices(const ApiGraph& g, const ClusterConfig& cfg = {}) {
  const auto q = detail::star_qualities(g);
  const CoverState empty(g.vertex_count());
  std::vector<double> rq(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    rq[v] = (relative_density(v, empty, g) + detail::relative_compactness(v, g, q, cfg.rc_comparison)) / 2.0;
  }
  std::vector<std::size_t> order(g.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rq[a] != rq[b]) return rq[a] > rq[b];
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return a < b;
  });
  return order;
}

/// First pass. Every vertex is covered on return; isolated vertices become
/// their own centers.
inline CoverState initial_clusters(const ApiGraph& g, const ClusterConfig& cfg = {}) {
  CoverState state(g.vertex_count());
  for (std::size_t v : rank_vertices(g, cfg)) {
    bool take = !state.covered[v];
    for (const auto& [u, w] : g.neighbors(v)) take = take || !state.covered[u];
    if (take) state.choose(v, g);
  }
  return state;
}

/// One final cluster: center first in `members`, remaining vertices sorted.
struct Cluster {
  std::size_t center = 0;
  std::vector<std::size_t> members;
};

using ClusterSet = std::vector<Cluster>;

/// Second pass. Stars start as the graph neighborhoods of the chosen
/// centers; a merge grows only the absorbing star.
inline ClusterSet refine_clusters(const ApiGraph& g, const CoverState& state) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> order = state.centers;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return a < b;
  });

  std::vector<bool> in_z(n, false);
  std::vector<bool> visited(n, false);
  std::vector<std::set<std::size_t>> satellites(n);
  // Number of current stars whose vertex set ({center} + satellites) holds x.
  std::vector<std::size_t> star_count(n, 0);
  for (std::size_t v : order) {
    in_z[v] = true;
    ++star_count[v];
    for (const auto& [u, w] : g.neighbors(v)) {
      satellites[v].insert(u);
      ++star_count[u];
    }
  }

  // u is useless when it is a satellite of another star and more than half
  // of its satellites also sit in some other star.
  auto useless = [&](std::size_t u) {
    if (satellites[u].empty()) return false;
    if (star_count[u] < 2) return false;
    std::size_t shared = 0;
    for (std::size_t s : satellites[u]) shared += star_count[s] >= 2 ? 1 : 0;
    return 2 * shared > satellites[u].size();
  };

  ClusterSet out;
  for (std::size_t v : order) {
    if (!in_z[v]) continue;
    std::vector<std::size_t> scan(satellites[v].begin(), satellites[v].end());
    for (std::size_t i = 0; i < scan.size(); ++i) {
      const std::size_t u = scan[i];
      if (!in_z[u] || visited[u]) continue;
      if (useless(u)) {
        --star_count[u];
        for (std::size_t s : satellites[u]) --star_count[s];
        for (std::size_t s : satellites[u]) {
          if (s == v) continue;
          if (satellites[v].insert(s).second) {
            ++star_count[s];
            scan.push_back(s);
          }
        }
        in_z[u] = false;
        satellites[u].clear();
      } else {
        visited[u] = true;
      }
    }
    visited[v] = true;
    Cluster c{v, {v}};
    c.members.insert(c.members.end(), satellites[v].begin(), satellites[v].end());
    out.push_back(std::move(c));
  }
  return out;
}

inline ClusterSet cluster(const ApiGraph& g, const ClusterConfig& cfg = {}) {
  if (g.empty()) return {};
  return refine_clusters(g, initial_clusters(g, cfg));
}

/// Clusters as methods, center first and the rest in lexicographic order.
inline std::vector<std::vector<MethodRef>> cluster_methods(const ApiGraph& g, const ClusterSet& clusters) {
  std::vector<std::vector<MethodRef>> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) {
    auto& row = out.emplace_back();
    for (std::size_t v : c.members) row.push_back(g.vertex(v));
  }
  return out;
}

/// One cluster per line, comma-separated qualified names, center first;
/// lines sorted.
inline std::string write_clusters(const std::vector<std::vector<MethodRef>>& clusters) {
  std::vector<std::string> lines;
  for (const auto& c : clusters) {
    std::string line;
    for (const auto& m : c) {
      if (!line.empty()) line += ",";
      line += m.qualified();
    }
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

inline std::vector<std::vector<MethodRef>> read_clusters(std::string_view text,
                                                         const std::string& source = "<string>") {
  std::vector<std::vector<MethodRef>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto& row = out.emplace_back();
    std::size_t start = 0;
    while (start <= line.size()) {
      auto comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      auto m = MethodRef::try_parse(std::string_view(line).substr(start, comma - start));
      if (!m) throw ParseError(source, line_no, "invalid method in cluster line");
      row.push_back(*std::move(m));
      start = comma + 1;
    }
  }
  return out;
}

}  // namespace apicomp
