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
#include <vector>

#include "apicomp/trace_model.hpp"

namespace apicomp {

/// Removes application frames from a classified tree. Each removed frame's
/// children are spliced into its parent's child list at the removed frame's
/// position, so surviving API frames keep their relative invocation order
/// and their API ancestors. An application root is replaced by a connector.
///
/// The result is the fixpoint of the level-order splice: a node's surviving
/// children are its API children, with every application child replaced by
/// that child's own surviving children. Computed bottom-up in one sweep.
///
/// Surviving frames carry an explicit API override so the output re-parses
/// and re-prunes to itself regardless of classifier.
inline CallTree prune(const CallTree& tree) {
  CallTree out{tree.app_id, tree.scenario_id, {}};
  const auto& in = tree.nodes;
  if (in.empty()) {
    CallNode connector;
    connector.connector = true;
    out.nodes.push_back(std::move(connector));
    return out;
  }

  // Pre-order storage: every child index exceeds its parent's, so a reverse
  // sweep sees children first.
  std::vector<std::vector<std::size_t>> kept(in.size());
  for (std::size_t i = in.size(); i-- > 0;) {
    for (std::size_t c : in[i].children) {
      if (in[c].is_api()) {
        kept[i].push_back(c);
      } else {
        kept[i].insert(kept[i].end(), kept[c].begin(), kept[c].end());
      }
    }
  }

  // Re-emit in pre-order.
  auto emit = [&](std::size_t src, bool as_connector) {
    CallNode n;
    if (as_connector) {
      n.connector = true;
    } else {
      n.method = in[src].method;
      n.origin = Origin::kApi;
      n.override_origin = OriginOverride::kApi;
    }
    out.nodes.push_back(std::move(n));
  };
  // (source node, index of emitted parent)
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  emit(0, !in[0].is_api());
  for (auto it = kept[0].rbegin(); it != kept[0].rend(); ++it) stack.emplace_back(*it, 0);
  while (!stack.empty()) {
    const auto [src, parent] = stack.back();
    stack.pop_back();
    const std::size_t index = out.nodes.size();
    emit(src, false);
    out.nodes[parent].children.push_back(index);
    for (auto it = kept[src].rbegin(); it != kept[src].rend(); ++it) stack.emplace_back(*it, index);
  }
  return out;
}

inline TraceCorpus prune(const TraceCorpus& corpus) {
  TraceCorpus out;
  for (const auto& [app, ts] : corpus.trees) {
    auto& dst = out.trees[app];
    dst.reserve(ts.size());
    for (const auto& t : ts) dst.push_back(prune(t));
  }
  return out;
}

}  // namespace apicomp
