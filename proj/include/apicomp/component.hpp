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

#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apicomp/errors.hpp"
#include "apicomp/method_ref.hpp"
#include "apicomp/trace_model.hpp"

namespace apicomp {

/// A parent-child edge observed in a pruned tree.
struct CallWitness {
  MethodRef caller;
  MethodRef callee;
  std::string app_id;
  std::string scenario_id;

  friend bool operator==(const CallWitness&, const CallWitness&) = default;
};

struct RequiredMethod {
  MethodRef method;
  /// First edge (in corpus order) from a provided method to this one.
  CallWitness witness;
  /// Indices of every component whose provided interface contains it.
  std::vector<std::size_t> owners;
};

struct Component {
  std::set<MethodRef> provided_interface;
  std::set<std::string> implementation_classes;
  std::vector<RequiredMethod> required_interface;  // sorted by method
};

/// One component per cluster. Required methods are direct callees of a
/// provided method that lie outside the provided interface.
inline std::vector<Component> assemble(const std::vector<std::vector<MethodRef>>& clusters,
                                       const TraceCorpus& pruned) {
  std::vector<Component> out(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    out[i].provided_interface.insert(clusters[i].begin(), clusters[i].end());
    for (const auto& m : clusters[i]) out[i].implementation_classes.insert(m.class_name);
  }

  std::map<MethodRef, std::vector<std::size_t>> owners;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& m : out[i].provided_interface) owners[m].push_back(i);
  }

  std::vector<std::map<MethodRef, CallWitness>> required(clusters.size());
  for (const auto& [app, trees] : pruned.trees) {
    for (const auto& t : trees) {
      for (const auto& node : t.nodes) {
        if (node.connector) continue;
        auto it = owners.find(node.method);
        if (it == owners.end()) continue;
        for (std::size_t c : node.children) {
          const auto& callee = t.nodes[c].method;
          for (std::size_t i : it->second) {
            if (!out[i].provided_interface.contains(callee)) {
              required[i].try_emplace(callee, CallWitness{node.method, callee, t.app_id, t.scenario_id});
            }
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto& [m, witness] : required[i]) {
      auto it = owners.find(m);
      out[i].required_interface.push_back(
          {m, std::move(witness), it == owners.end() ? std::vector<std::size_t>{} : it->second});
    }
  }
  return out;
}

/// Per-run summary over all components.
struct ComponentStats {
  std::size_t components = 0;
  double avg_interface_methods = 0.0;
  double avg_classes = 0.0;
};

inline ComponentStats component_stats(const std::vector<Component>& components) {
  ComponentStats s;
  s.components = components.size();
  if (components.empty()) return s;
  for (const auto& c : components) {
    s.avg_interface_methods += static_cast<double>(c.provided_interface.size());
    s.avg_classes += static_cast<double>(c.implementation_classes.size());
  }
  s.avg_interface_methods /= static_cast<double>(components.size());
  s.avg_classes /= static_cast<double>(components.size());
  return s;
}

/// Externally judged "functionally related" method pairs. Symmetric;
/// unlisted pairs are unrelated.
class RelatednessLabels {
 public:
  void relate(const MethodRef& a, const MethodRef& b) {
    if (a == b) return;
    pairs_.insert(a < b ? std::pair{a, b} : std::pair{b, a});
  }

  bool related(const MethodRef& a, const MethodRef& b) const {
    return pairs_.contains(a < b ? std::pair{a, b} : std::pair{b, a});
  }

  std::size_t size() const noexcept { return pairs_.size(); }

  /// "classA.methodA TAB classB.methodB" per line; '#' comments allowed.
  static RelatednessLabels parse(std::string_view text, const std::string& source = "<string>") {
    RelatednessLabels labels;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto f = detail::split_tabs(line);
      if (f.size() != 2) throw ParseError(source, line_no, "expected 'methodA\\tmethodB'");
      auto a = MethodRef::try_parse(f[0]);
      auto b = MethodRef::try_parse(f[1]);
      if (!a || !b) throw ParseError(source, line_no, "invalid qualified method");
      labels.relate(*a, *b);
    }
    return labels;
  }

 private:
  std::set<std::pair<MethodRef, MethodRef>> pairs_;
};

/// Share of interface methods related to at least one other method of the
/// same interface.
inline double precision(const std::set<MethodRef>& interface_methods, const RelatednessLabels& labels) {
  if (interface_methods.empty()) throw ArgumentError("precision of an empty interface");
  std::size_t related = 0;
  for (const auto& m : interface_methods) {
    for (const auto& other : interface_methods) {
      if (other != m && labels.related(m, other)) {
        ++related;
        break;
      }
    }
  }
  return static_cast<double>(related) / static_cast<double>(interface_methods.size());
}

inline double precision(const Component& c, const RelatednessLabels& labels) {
  return precision(c.provided_interface, labels);
}

}  // namespace apicomp
