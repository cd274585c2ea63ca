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

// Synthetic trace corpora with planted components.
//
// Every scenario focuses on one planted component (round-robin over
// app * trees) and calls all of its methods below an application entry
// point, so planted methods always co-occur. The raw tree height is drawn
// from [depth_min, depth_max]: a chain of that many API frames fixes the
// height, the remaining methods hang off shallower frames, some behind an
// application helper frame. Optional extras per tree:
//   - with inter_call_probability, one method of another component is called
//     from a random API frame;
//   - each API frame calls a noise method with noise_probability.
//
// Names: planted methods "api.c<k>.Class<j>.m<i>", noise "api.noise.Noise.n<i>",
// application frames "app<a>.Client.*". Classifier: prefix "api.".

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "apicomp/errors.hpp"
#include "apicomp/method_ref.hpp"
#include "apicomp/rng.hpp"
#include "apicomp/trace_model.hpp"

namespace apicomp {

struct PlantSpec {
  std::size_t component_count = 3;
  std::size_t methods_min = 3;
  std::size_t methods_max = 6;
  double inter_call_probability = 0.0;
  std::size_t trees_per_app = 4;
  std::size_t apps = 2;
  std::size_t depth_min = 1;
  std::size_t depth_max = 4;
  double noise_probability = 0.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (component_count < 1 || methods_min < 1 || trees_per_app < 1 || apps < 1) {
      throw ConfigError("plant counts must be >= 1");
    }
    if (methods_min > methods_max) throw ConfigError("methods range is empty");
    for (double p : {inter_call_probability, noise_probability}) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probabilities must lie in [0,1]");
    }
    if (depth_min < 1 || depth_min > depth_max) {
      throw ConfigError("depth range admits no tree (need 1 <= depth_min <= depth_max)");
    }
    if (apps * trees_per_app < component_count) {
      throw ConfigError("fewer scenarios than planted components");
    }
    if (inter_call_probability > 0.0 && component_count < 2) {
      throw ConfigError("inter-component calls need at least two components");
    }
  }
};

struct SynthCorpus {
  TraceCorpus corpus;
  /// Planted provided interfaces, each sorted.
  std::vector<std::vector<MethodRef>> ground_truth;
  ApiClassifier classifier{{"api."}};
};

namespace detail {

struct TreeBuilder {
  struct Node {
    MethodRef method;
    std::size_t depth;
    bool api;
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes;

  std::size_t add(std::size_t parent, MethodRef m, bool api) {
    const std::size_t depth = nodes.empty() ? 0 : nodes[parent].depth + 1;
    nodes.push_back({std::move(m), depth, api, {}});
    const std::size_t index = nodes.size() - 1;
    if (index > 0) nodes[parent].children.push_back(index);
    return index;
  }

  CallTree finish(std::string app, std::string scenario) const {
    CallTree t{std::move(app), std::move(scenario), {}};
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};  // (builder node, parent out index)
    while (!stack.empty()) {
      const auto [b, parent] = stack.back();
      stack.pop_back();
      const std::size_t index = t.nodes.size();
      CallNode n;
      n.method = nodes[b].method;
      t.nodes.push_back(std::move(n));
      if (index > 0) t.nodes[parent].children.push_back(index);
      for (auto it = nodes[b].children.rbegin(); it != nodes[b].children.rend(); ++it) {
        stack.emplace_back(*it, index);
      }
    }
    return t;
  }
};

inline std::string padded(std::size_t n, std::size_t width) {
  auto s = std::to_string(n);
  return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

}  // namespace detail

/// Deterministic in `spec` (including the seed); no other state is read.
inline SynthCorpus generate(const PlantSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  SynthCorpus out;

  for (std::size_t k = 0; k < spec.component_count; ++k) {
    const std::size_t count = rng.between(spec.methods_min, spec.methods_max);
    const std::size_t classes = rng.between(1, std::max<std::size_t>(1, count / 2));
    auto& methods = out.ground_truth.emplace_back();
    for (std::size_t i = 0; i < count; ++i) {
      methods.emplace_back("api.c" + std::to_string(k) + ".Class" + std::to_string(i % classes),
                           "m" + std::to_string(i));
    }
    std::sort(methods.begin(), methods.end());
  }
  const std::size_t noise_pool = std::max<std::size_t>(4, spec.component_count);

  const std::size_t scenario_width = std::to_string(spec.trees_per_app - 1).size();
  const std::size_t app_width = std::to_string(spec.apps - 1).size();
  for (std::size_t a = 0; a < spec.apps; ++a) {
    const std::string app_id = "app" + detail::padded(a, app_width);
    const std::string client = "app" + std::to_string(a) + ".Client";
    for (std::size_t s = 0; s < spec.trees_per_app; ++s) {
      const std::size_t k = (a * spec.trees_per_app + s) % spec.component_count;
      std::vector<MethodRef> planted = out.ground_truth[k];
      for (std::size_t i = planted.size(); i > 1; --i) std::swap(planted[i - 1], planted[rng.below(i)]);

      detail::TreeBuilder b;
      b.add(0, MethodRef(client, "main"), false);
      const std::size_t height = rng.between(spec.depth_min, spec.depth_max);
      std::vector<std::size_t> api_nodes;
      std::vector<std::size_t> shallow{0};  // frames at depth < height
      std::size_t tip = 0;
      for (std::size_t d = 0; d < height; ++d) {
        tip = b.add(tip, planted[d % planted.size()], true);
        api_nodes.push_back(tip);
        if (d + 1 < height) shallow.push_back(tip);
      }
      std::size_t helpers = 0;
      for (std::size_t i = height; i < planted.size(); ++i) {
        std::size_t parent = shallow[rng.below(shallow.size())];
        if (b.nodes[parent].depth + 2 <= height && rng.chance(0.3)) {
          parent = b.add(parent, MethodRef(client, "helper" + std::to_string(helpers++)), false);
        }
        const auto n = b.add(parent, planted[i], true);
        api_nodes.push_back(n);
        if (b.nodes[n].depth < height) shallow.push_back(n);
      }
      if (spec.inter_call_probability > 0.0 && rng.chance(spec.inter_call_probability)) {
        std::size_t other = rng.below(spec.component_count - 1);
        if (other >= k) ++other;
        const auto& foreign = out.ground_truth[other];
        std::vector<std::size_t> callers;
        for (std::size_t n : api_nodes) {
          if (b.nodes[n].depth < height) callers.push_back(n);
        }
        if (callers.empty()) callers.push_back(0);
        b.add(callers[rng.below(callers.size())], foreign[rng.below(foreign.size())], true);
      }
      if (spec.noise_probability > 0.0) {
        for (std::size_t n : api_nodes) {
          if (b.nodes[n].depth < height && rng.chance(spec.noise_probability)) {
            b.add(n, MethodRef("api.noise.Noise", "n" + std::to_string(rng.below(noise_pool))), true);
          }
        }
      }
      out.corpus.add(b.finish(app_id, "s" + detail::padded(s, scenario_width)));
    }
  }
  return out;
}

/// Writes the corpus layout plus "ground_truth.txt" (one planted component
/// per line, comma-separated) and "classifier.txt" at the corpus root.
inline void write_synth_corpus(const std::filesystem::path& dir, const SynthCorpus& synth) {
  write_corpus(dir, synth.corpus);
  std::ofstream gt(dir / "ground_truth.txt", std::ios::binary);
  for (const auto& component : synth.ground_truth) {
    std::string line;
    for (const auto& m : component) {
      if (!line.empty()) line += ",";
      line += m.qualified();
    }
    gt << line << "\n";
  }
  std::ofstream cls(dir / "classifier.txt", std::ios::binary);
  for (const auto& p : synth.classifier.api_prefixes) cls << p << "\n";
}

}  // namespace apicomp
