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

// Affinity between API methods measured over pruned call trees.
//
// Three attributes are computed per method pair and averaged over every
// unordered pair of a method set:
//
//   frequency  mean of local (per-app share of trees containing both) and
//              global (share of apps with a tree containing both) frequency
//   distance   per tree, 1 - avgPath / (2 * treeDepth); averaged per app,
//              then over apps. Absent pairs score 0.
//   weight     per tree, direct parent-child calls between the pair over
//              all method-to-method edges; averaged over co-occurring trees
//              (or summed and divided by the app count, kLiteral)
//
// quality() is the weighted mean of the three set-level attributes.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apicomp/errors.hpp"
#include "apicomp/method_ref.hpp"
#include "apicomp/rng.hpp"
#include "apicomp/trace_model.hpp"

namespace apicomp {

/// Attribute weights of the combined quality. Each in [0,1], sum > 0.
struct QualityWeights {
  double freq = 1.0;
  double dist = 1.0;
  double weight = 1.0;

  double sum() const noexcept { return freq + dist + weight; }

  void validate() const {
    for (double w : {freq, dist, weight}) {
      if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("quality weights must lie in [0,1]");
    }
    if (!(sum() > 0.0)) throw ConfigError("quality weights must not all be zero");
  }
};

/// kExample averages per-tree weight over trees where the pair co-occurs;
/// kLiteral sums per-tree weight over all trees and divides by the app count
/// (not bounded by 1).
enum class WeightFormula { kExample, kLiteral };

struct MetricsOptions {
  WeightFormula weight_formula = WeightFormula::kExample;
  /// Max occurrence pairs enumerated per (pair, tree) for the average path
  /// length; beyond it a seeded uniform sample of this size is used.
  std::size_t distance_pair_cap = 10000;
};

struct PairAffinity {
  double lfreq = 0.0;
  double gfreq = 0.0;
  double distance = 0.0;
  double weight = 0.0;

  double frequency() const noexcept { return (lfreq + gfreq) / 2.0; }
};

struct SetAffinity {
  double call_freq = 0.0;
  double call_dist = 0.0;
  double call_weight = 0.0;
  double quality = 0.0;
};

using MethodId = std::uint32_t;

/// Flattened view of one pruned tree keyed by interned method ids.
class IndexedTree {
 public:
  static constexpr MethodId kNoMethod = static_cast<MethodId>(-1);

  template <class Intern>
  IndexedTree(const CallTree& tree, Intern&& intern)
      : app_id_(tree.app_id), scenario_id_(tree.scenario_id) {
    const auto n = tree.nodes.size();
    parent_.assign(n, kNoParent);
    depth_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& node = tree.nodes[i];
      const MethodId label = node.connector ? kNoMethod : intern(node.method);
      if (!node.connector) occurrences_[label].push_back(i);
      for (std::size_t c : node.children) {
        parent_[c] = i;
        depth_[c] = depth_[i] + 1;
        height_ = std::max(height_, depth_[c]);
        if (!node.connector) {
          ++method_edges_;
          ++direct_calls_[pair_key(label, intern(tree.nodes[c].method))];
        }
      }
    }
  }

  const std::string& app_id() const noexcept { return app_id_; }
  const std::string& scenario_id() const noexcept { return scenario_id_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t method_edges() const noexcept { return method_edges_; }
  std::size_t size() const noexcept { return parent_.size(); }

  bool contains(MethodId m) const { return occurrences_.contains(m); }

  const std::vector<std::size_t>& occurrences(MethodId m) const {
    static const std::vector<std::size_t> kNone;
    auto it = occurrences_.find(m);
    return it == occurrences_.end() ? kNone : it->second;
  }

  /// Distinct methods present in the tree, ascending id.
  std::vector<MethodId> methods() const {
    std::vector<MethodId> out;
    out.reserve(occurrences_.size());
    for (const auto& [m, occ] : occurrences_) out.push_back(m);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Parent-child edges whose endpoints are labelled {a, b}, either direction.
  std::size_t direct_calls(MethodId a, MethodId b) const {
    auto it = direct_calls_.find(pair_key(a, b));
    return it == direct_calls_.end() ? 0 : it->second;
  }

  /// Edges on the tree path between two nodes.
  std::size_t path_length(std::size_t a, std::size_t b) const {
    std::size_t steps = 0;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        a = parent_[a];
      } else {
        b = parent_[b];
      }
      ++steps;
    }
    return steps;
  }

  static std::uint64_t pair_key(MethodId a, MethodId b) noexcept {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

 private:
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

  std::string app_id_;
  std::string scenario_id_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> depth_;
  std::size_t height_ = 0;
  std::size_t method_edges_ = 0;
  std::unordered_map<MethodId, std::vector<std::size_t>> occurrences_;
  std::unordered_map<std::uint64_t, std::size_t> direct_calls_;
};

/// Immutable index over a pruned corpus. Methods are interned in
/// lexicographic MethodRef order, so ids are stable for a given corpus.
/// All queries are const and safe to call concurrently.
class CorpusIndex {
 public:
  explicit CorpusIndex(const TraceCorpus& pruned, MetricsOptions options = {}) : options_(options) {
    std::set<MethodRef> all;
    for (const auto& [app, ts] : pruned.trees) {
      for (const auto& t : ts) {
        for (const auto& n : t.nodes) {
          if (!n.connector) all.insert(n.method);
        }
      }
    }
    methods_.assign(all.begin(), all.end());
    for (MethodId i = 0; i < methods_.size(); ++i) ids_.emplace(methods_[i], i);
    auto intern = [this](const MethodRef& m) { return ids_.at(m); };
    for (const auto& [app, ts] : pruned.trees) {
      if (ts.empty()) continue;
      auto& dst = apps_.emplace_back();
      for (const auto& t : ts) dst.emplace_back(t, intern);
    }
  }

  const MetricsOptions& options() const noexcept { return options_; }
  std::size_t app_count() const noexcept { return apps_.size(); }
  const std::vector<std::vector<IndexedTree>>& apps() const noexcept { return apps_; }

  std::size_t method_count() const noexcept { return methods_.size(); }
  const std::vector<MethodRef>& methods() const noexcept { return methods_; }
  const MethodRef& method(MethodId id) const { return methods_.at(id); }

  std::optional<MethodId> find(const MethodRef& m) const {
    auto it = ids_.find(m);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

 private:
  MetricsOptions options_;
  std::vector<MethodRef> methods_;
  std::unordered_map<MethodRef, MethodId, MethodRefHash> ids_;
  std::vector<std::vector<IndexedTree>> apps_;
};

namespace detail {

inline void require_distinct(const MethodRef& c, const MethodRef& v) {
  if (c == v) throw ArgumentError("pair metrics need two distinct methods: " + c.qualified());
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-tree primitives (ids)

inline bool co_occur(MethodId c, MethodId v, const IndexedTree& t) {
  return t.contains(c) && t.contains(v);
}

/// 1 - avgPath / (2 * height), clamped to [0,1]; 0 when either method is
/// absent or the tree has height 0.
inline double pair_dis(MethodId c, MethodId v, const IndexedTree& t, const CorpusIndex& index) {
  if (t.height() == 0 || !co_occur(c, v, t)) return 0.0;
  const auto& oc = t.occurrences(c);
  const auto& ov = t.occurrences(v);
  const std::size_t pairs = oc.size() * ov.size();
  const std::size_t cap = index.options().distance_pair_cap;
  double total = 0.0;
  std::size_t counted = 0;
  if (cap == 0 || pairs <= cap) {
    for (std::size_t a : oc) {
      for (std::size_t b : ov) total += static_cast<double>(t.path_length(a, b));
    }
    counted = pairs;
  } else {
    // Seeded by the canonical pair and the tree identity so the sample is
    // reproducible and symmetric in (c, v).
    const auto& first = std::min(index.method(c), index.method(v));
    const auto& second = std::max(index.method(c), index.method(v));
    std::uint64_t seed = detail::fnv1a(first.qualified());
    seed = detail::fnv1a("\t" + second.qualified(), seed);
    seed = detail::fnv1a("\t" + t.app_id() + "\t" + t.scenario_id(), seed);
    SplitMix64 rng(seed);
    const auto& occ_first = first == index.method(c) ? oc : ov;
    const auto& occ_second = first == index.method(c) ? ov : oc;
    for (std::size_t k = 0; k < cap; ++k) {
      const auto a = occ_first[rng.below(occ_first.size())];
      const auto b = occ_second[rng.below(occ_second.size())];
      total += static_cast<double>(t.path_length(a, b));
    }
    counted = cap;
  }
  const double avg = total / static_cast<double>(counted);
  const double dis = 1.0 - avg / (2.0 * static_cast<double>(t.height()));
  return std::clamp(dis, 0.0, 1.0);
}

/// Direct calls between the pair over method-to-method edges; 0 for a tree
/// without such edges.
inline double wei(MethodId c, MethodId v, const IndexedTree& t) {
  if (t.method_edges() == 0) return 0.0;
  return static_cast<double>(t.direct_calls(c, v)) / static_cast<double>(t.method_edges());
}

// ---------------------------------------------------------------------------
// Corpus-level pair metrics (ids)

/// All four pair attributes in one pass over the corpus.
inline PairAffinity pair_affinity(MethodId c, MethodId v, const CorpusIndex& index) {
  PairAffinity p;
  if (index.app_count() == 0) return p;
  std::size_t apps_with_pair = 0;
  std::size_t co_trees = 0;
  double wei_sum = 0.0;
  for (const auto& trees : index.apps()) {
    std::size_t hits = 0;
    double dis_sum = 0.0;
    for (const auto& t : trees) {
      if (!co_occur(c, v, t)) continue;
      ++hits;
      dis_sum += pair_dis(c, v, t, index);
      wei_sum += wei(c, v, t);
      ++co_trees;
    }
    const auto n = static_cast<double>(trees.size());
    p.lfreq += static_cast<double>(hits) / n;
    p.distance += dis_sum / n;
    if (hits > 0) ++apps_with_pair;
  }
  const auto apps = static_cast<double>(index.app_count());
  p.lfreq /= apps;
  p.distance /= apps;
  p.gfreq = static_cast<double>(apps_with_pair) / apps;
  if (index.options().weight_formula == WeightFormula::kLiteral) {
    p.weight = wei_sum / apps;
  } else {
    p.weight = co_trees == 0 ? 0.0 : wei_sum / static_cast<double>(co_trees);
  }
  return p;
}

// ---------------------------------------------------------------------------
// MethodRef API

namespace detail {

/// Looks up both methods; nullopt when either never occurs in the corpus,
/// in which case every pair attribute is 0.
inline std::optional<std::pair<MethodId, MethodId>> lookup(const MethodRef& c, const MethodRef& v,
                                                           const CorpusIndex& index) {
  require_distinct(c, v);
  auto a = index.find(c);
  auto b = index.find(v);
  if (!a || !b) return std::nullopt;
  return std::pair{*a, *b};
}

inline std::vector<MethodRef> as_set(const std::vector<MethodRef>& methods) {
  std::set<MethodRef> s(methods.begin(), methods.end());
  if (s.size() < 2) throw ArgumentError("set metrics need at least two distinct methods");
  return {s.begin(), s.end()};
}

template <class PairMetric>
double mean_over_pairs(const std::vector<MethodRef>& methods, PairMetric&& metric) {
  const auto set = as_set(methods);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      sum += metric(set[i], set[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace detail

/// True iff both methods label some node of the (pruned) tree.
inline bool co_occur(const MethodRef& c, const MethodRef& v, const CallTree& tree) {
  detail::require_distinct(c, v);
  bool has_c = false;
  bool has_v = false;
  for (const auto& n : tree.nodes) {
    if (n.connector) continue;
    has_c = has_c || n.method == c;
    has_v = has_v || n.method == v;
  }
  return has_c && has_v;
}

inline PairAffinity pair_affinity(const MethodRef& c, const MethodRef& v, const CorpusIndex& index) {
  auto ids = detail::lookup(c, v, index);
  return ids ? pair_affinity(ids->first, ids->second, index) : PairAffinity{};
}

inline double local_freq(const MethodRef& c, const MethodRef& v, const CorpusIndex& index) {
  return pair_affinity(c, v, index).lfreq;
}

inline double global_freq(const MethodRef& c, const MethodRef& v, const CorpusIndex& index) {
  return pair_affinity(c, v, index).gfreq;
}

inline double distance(const MethodRef& c, const MethodRef& v, const CorpusIndex& index) {
  return pair_affinity(c, v, index).distance;
}

inline double weight(const MethodRef& c, const MethodRef& v, const CorpusIndex& index) {
  return pair_affinity(c, v, index).weight;
}

/// Looks up one indexed tree by app and scenario id.
inline const IndexedTree& find_tree(const CorpusIndex& index, std::string_view app,
                                    std::string_view scenario) {
  for (const auto& trees : index.apps()) {
    for (const auto& t : trees) {
      if (t.app_id() == app && t.scenario_id() == scenario) return t;
    }
  }
  throw ArgumentError("no tree " + std::string(app) + "/" + std::string(scenario));
}

inline double pair_dis(const MethodRef& c, const MethodRef& v, const IndexedTree& t,
                       const CorpusIndex& index) {
  auto ids = detail::lookup(c, v, index);
  return ids ? pair_dis(ids->first, ids->second, t, index) : 0.0;
}

inline double wei(const MethodRef& c, const MethodRef& v, const IndexedTree& t,
                  const CorpusIndex& index) {
  auto ids = detail::lookup(c, v, index);
  return ids ? wei(ids->first, ids->second, t) : 0.0;
}

inline double call_freq(const std::vector<MethodRef>& set, const CorpusIndex& index) {
  return detail::mean_over_pairs(
      set, [&](const MethodRef& a, const MethodRef& b) { return pair_affinity(a, b, index).frequency(); });
}

inline double call_dist(const std::vector<MethodRef>& set, const CorpusIndex& index) {
  return detail::mean_over_pairs(set, [&](const MethodRef& a, const MethodRef& b) {
    return pair_affinity(a, b, index).distance;
  });
}

inline double call_weight(const std::vector<MethodRef>& set, const CorpusIndex& index) {
  return detail::mean_over_pairs(set, [&](const MethodRef& a, const MethodRef& b) {
    return pair_affinity(a, b, index).weight;
  });
}

inline double combine(double call_freq, double call_dist, double call_weight, const QualityWeights& w) {
  w.validate();
  return (w.freq * call_freq + w.dist * call_dist + w.weight * call_weight) / w.sum();
}

/// The three set attributes and their weighted combination, one pass per pair.
inline SetAffinity set_affinity(const std::vector<MethodRef>& methods, const CorpusIndex& index,
                                const QualityWeights& w) {
  w.validate();
  const auto set = detail::as_set(methods);
  SetAffinity s;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const auto p = pair_affinity(set[i], set[j], index);
      s.call_freq += p.frequency();
      s.call_dist += p.distance;
      s.call_weight += p.weight;
      ++pairs;
    }
  }
  s.call_freq /= static_cast<double>(pairs);
  s.call_dist /= static_cast<double>(pairs);
  s.call_weight /= static_cast<double>(pairs);
  s.quality = combine(s.call_freq, s.call_dist, s.call_weight, w);
  return s;
}

inline double quality(const std::vector<MethodRef>& set, const CorpusIndex& index,
                      const QualityWeights& w) {
  return set_affinity(set, index, w).quality;
}

}  // namespace apicomp
