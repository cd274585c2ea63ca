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

// Call trees recorded from client-application usage scenarios.
//
// Trace file format (UTF-8, one call event per line, pre-order):
//
//   <depth> TAB <class>.<method> [TAB API|APP]
//
// The first event has depth 0 and every nesting step increases depth by
// exactly one. Lines starting with '#' and blank lines are ignored. The
// optional trailing token overrides the prefix classifier for that frame.
// The reserved name "<connector>" at depth 0 marks the synthetic root that
// pruning inserts above application entry points.
//
// A corpus is a directory with one subdirectory per application; every
// "*.trace" file inside is one scenario named by its file stem.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "apicomp/errors.hpp"
#include "apicomp/method_ref.hpp"
#include "apicomp/parallel.hpp"

namespace apicomp {

enum class Origin { kApplication, kApi };

/// Per-line classifier override parsed from the trace file.
enum class OriginOverride { kNone, kApplication, kApi };

inline constexpr std::string_view kConnectorName = "<connector>";

/// One frame of a call tree. Children are indices into the owning tree's
/// node array, in invocation order.
struct CallNode {
  MethodRef method;  // empty for the connector
  Origin origin = Origin::kApplication;
  OriginOverride override_origin = OriginOverride::kNone;
  bool connector = false;
  std::vector<std::size_t> children;

  bool is_api() const noexcept { return !connector && origin == Origin::kApi; }
};

/// Rooted ordered tree stored as a pre-order node array; nodes[0] is the root.
/// An empty tree (zero nodes) is never produced by the parser.
struct CallTree {
  std::string app_id;
  std::string scenario_id;
  std::vector<CallNode> nodes;

  const CallNode& root() const { return nodes.front(); }
  bool has_connector_root() const noexcept { return !nodes.empty() && nodes.front().connector; }

  /// Method frames only; the connector is not a call.
  std::size_t method_node_count() const noexcept {
    return nodes.size() - (has_connector_root() ? 1 : 0);
  }

  std::size_t edge_count() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }

  /// Edges on the longest root-to-leaf path.
  std::size_t depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t c : nodes[i].children) {
        level[c] = level[i] + 1;
        best = std::max(best, level[c]);
      }
    }
    return best;
  }

  friend bool operator==(const CallTree& a, const CallTree& b) {
    if (a.app_id != b.app_id || a.scenario_id != b.scenario_id || a.nodes.size() != b.nodes.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      const auto& x = a.nodes[i];
      const auto& y = b.nodes[i];
      if (x.method != y.method || x.origin != y.origin || x.override_origin != y.override_origin ||
          x.connector != y.connector || x.children != y.children) {
        return false;
      }
    }
    return true;
  }
};

/// Applications mapped to their scenarios' call trees, ordered by app id.
struct TraceCorpus {
  std::map<std::string, std::vector<CallTree>> trees;

  std::size_t app_count() const noexcept { return trees.size(); }
  bool empty() const noexcept { return trees.empty(); }

  std::size_t tree_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [app, ts] : trees) n += ts.size();
    return n;
  }

  void add(CallTree tree) {
    auto key = tree.app_id;
    trees[key].push_back(std::move(tree));
  }
};

/// A method is API iff its class name starts with one of the prefixes.
struct ApiClassifier {
  std::vector<std::string> api_prefixes;

  bool is_api(const MethodRef& m) const {
    return std::any_of(api_prefixes.begin(), api_prefixes.end(), [&](const std::string& p) {
      return std::string_view(m.class_name).starts_with(p);
    });
  }

  /// One prefix per line, '#' comments and blank lines skipped.
  static ApiClassifier parse(std::string_view text) {
    ApiClassifier c;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t");
      c.api_prefixes.push_back(line.substr(first, last - first + 1));
    }
    return c;
  }
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parses one trace file into a call tree. Origins are left as APPLICATION
/// until classify() runs; override tokens are recorded but not applied.
inline CallTree parse_trace(std::string_view text, std::string app_id, std::string scenario_id,
                            const std::string& source = "<string>") {
  CallTree tree{std::move(app_id), std::move(scenario_id), {}};
  std::vector<std::size_t> stack;  // open ancestors, stack[d] is the node at depth d
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = detail::split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(source, line_no, "expected '<depth>\\t<class>.<method>[\\tAPI|APP]'");
    }
    std::size_t depth = 0;
    const auto d = fields[0];
    const auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), depth);
    if (ec != std::errc() || ptr != d.data() + d.size() || d.empty()) {
      throw ParseError(source, line_no, "invalid depth '" + std::string(d) + "'");
    }
    if (tree.nodes.empty() && depth != 0) {
      throw ParseError(source, line_no, "first event must have depth 0");
    }
    if (!tree.nodes.empty() && depth == 0) {
      throw ParseError(source, line_no, "second root at depth 0");
    }
    if (depth > stack.size()) {
      throw ParseError(source, line_no,
                       "depth jumps from " + std::to_string(stack.size() - 1) + " to " +
                           std::to_string(depth));
    }

    CallNode node;
    if (fields[1] == kConnectorName) {
      if (depth != 0) throw ParseError(source, line_no, "connector allowed only at depth 0");
      node.connector = true;
    } else {
      auto m = MethodRef::try_parse(fields[1]);
      if (!m) {
        throw ParseError(source, line_no, "invalid qualified method '" + std::string(fields[1]) + "'");
      }
      node.method = *std::move(m);
    }
    if (fields.size() == 3) {
      if (node.connector) throw ParseError(source, line_no, "connector takes no origin token");
      if (fields[2] == "API") {
        node.override_origin = OriginOverride::kApi;
      } else if (fields[2] == "APP") {
        node.override_origin = OriginOverride::kApplication;
      } else {
        throw ParseError(source, line_no, "unknown origin token '" + std::string(fields[2]) + "'");
      }
    }

    const std::size_t index = tree.nodes.size();
    tree.nodes.push_back(std::move(node));
    stack.resize(depth);
    if (depth > 0) tree.nodes[stack[depth - 1]].children.push_back(index);
    stack.push_back(index);
  }
  if (tree.nodes.empty()) throw ParseError(source, line_no, "empty trace");
  return tree;
}

/// Writes the tree back in trace format; parse_trace(serialize_trace(t)) == t.
inline std::string serialize_trace(const CallTree& tree) {
  std::string out;
  if (tree.nodes.empty()) return out;
  std::vector<std::pair<std::size_t, std::size_t>> todo{{0, 0}};  // (node, depth)
  while (!todo.empty()) {
    const auto [i, depth] = todo.back();
    todo.pop_back();
    const auto& n = tree.nodes[i];
    out += std::to_string(depth);
    out += '\t';
    out += n.connector ? std::string(kConnectorName) : n.method.qualified();
    if (n.override_origin == OriginOverride::kApi) out += "\tAPI";
    if (n.override_origin == OriginOverride::kApplication) out += "\tAPP";
    out += '\n';
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) todo.emplace_back(*it, depth + 1);
  }
  return out;
}

/// Sets every node's origin from its override token or, lacking one, the
/// classifier. Shape is unchanged; idempotent.
inline CallTree classify(CallTree tree, const ApiClassifier& classifier) {
  for (auto& n : tree.nodes) {
    if (n.connector) continue;
    switch (n.override_origin) {
      case OriginOverride::kApi: n.origin = Origin::kApi; break;
      case OriginOverride::kApplication: n.origin = Origin::kApplication; break;
      case OriginOverride::kNone:
        n.origin = classifier.is_api(n.method) ? Origin::kApi : Origin::kApplication;
        break;
    }
  }
  return tree;
}

inline TraceCorpus classify(TraceCorpus corpus, const ApiClassifier& classifier) {
  for (auto& [app, ts] : corpus.trees) {
    for (auto& t : ts) t = classify(std::move(t), classifier);
  }
  return corpus;
}

/// Size and repetition statistics. Repetition = number of frames bearing one
/// distinct API method.
struct TraceStats {
  std::size_t nodes = 0;
  std::size_t unique_api_methods = 0;
  std::size_t height = 0;
  std::size_t min_repetition = 0;
  std::size_t max_repetition = 0;
  double avg_repetition = 0.0;

  friend bool operator==(const TraceStats&, const TraceStats&) = default;
};

namespace detail {

inline TraceStats stats_from_counts(std::size_t nodes, std::size_t height,
                                    const std::map<MethodRef, std::size_t>& reps) {
  TraceStats s;
  s.nodes = nodes;
  s.height = height;
  s.unique_api_methods = reps.size();
  if (reps.empty()) return s;
  std::size_t total = 0;
  s.min_repetition = reps.begin()->second;
  for (const auto& [m, r] : reps) {
    total += r;
    s.min_repetition = std::min(s.min_repetition, r);
    s.max_repetition = std::max(s.max_repetition, r);
  }
  s.avg_repetition = static_cast<double>(total) / static_cast<double>(reps.size());
  return s;
}

inline void count_api(const CallTree& tree, std::map<MethodRef, std::size_t>& reps) {
  for (const auto& n : tree.nodes) {
    if (n.is_api()) ++reps[n.method];
  }
}

}  // namespace detail

inline TraceStats tree_stats(const CallTree& tree) {
  std::map<MethodRef, std::size_t> reps;
  detail::count_api(tree, reps);
  return detail::stats_from_counts(tree.method_node_count(), tree.depth(), reps);
}

/// Aggregate over a corpus: summed node counts, max height, repetition over
/// the corpus-wide distinct API methods.
inline TraceStats corpus_stats(const TraceCorpus& corpus) {
  std::map<MethodRef, std::size_t> reps;
  std::size_t nodes = 0;
  std::size_t height = 0;
  for (const auto& [app, ts] : corpus.trees) {
    for (const auto& t : ts) {
      detail::count_api(t, reps);
      nodes += t.method_node_count();
      height = std::max(height, t.depth());
    }
  }
  return detail::stats_from_counts(nodes, height, reps);
}

/// Loads every "<dir>/<app>/*.trace" file, parsing files on up to `jobs`
/// threads (0 = hardware concurrency). Apps without trace files are skipped,
/// so an empty result means no usable traces at all. Files within an app are
/// ordered by name regardless of `jobs`.
inline TraceCorpus load_corpus(const std::filesystem::path& dir, std::size_t jobs = 1) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir.string());
  std::vector<fs::path> apps;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) apps.push_back(e.path());
  }
  std::sort(apps.begin(), apps.end());
  std::vector<std::pair<std::string, fs::path>> files;  // (app id, file)
  for (const auto& app_dir : apps) {
    std::vector<fs::path> app_files;
    for (const auto& e : fs::directory_iterator(app_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".trace") app_files.push_back(e.path());
    }
    std::sort(app_files.begin(), app_files.end());
    for (auto& f : app_files) files.emplace_back(app_dir.filename().string(), std::move(f));
  }
  std::vector<CallTree> trees(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    const auto& [app, f] = files[i];
    trees[i] = parse_trace(detail::read_file(f), app, f.stem().string(), f.string());
  });
  TraceCorpus corpus;
  for (auto& t : trees) corpus.add(std::move(t));
  return corpus;
}

/// Mirror of load_corpus: "<dir>/<app>/<scenario>.trace".
inline void write_corpus(const std::filesystem::path& dir, const TraceCorpus& corpus) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [app, ts] : corpus.trees) {
    fs::create_directories(dir / app);
    for (const auto& t : ts) {
      std::ofstream out(dir / app / (t.scenario_id + ".trace"), std::ios::binary);
      if (!out) throw ConfigError("cannot write " + (dir / app / (t.scenario_id + ".trace")).string());
      out << serialize_trace(t);
    }
  }
}

}  // namespace apicomp
