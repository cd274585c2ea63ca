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

// Component report: configuration echo, trace statistics before and after
// pruning, graph size, components, and (after `evaluate`) precision.
// Rendered as JSON (schema "apicomp.report/1", see README) and as text.
// Both renderings are pure functions of the report value.

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "apicomp/component.hpp"
#include "apicomp/errors.hpp"
#include "apicomp/method_ref.hpp"
#include "apicomp/trace_model.hpp"

namespace apicomp {

inline constexpr const char* kReportSchema = "apicomp.report/1";

struct ConfigEcho {
  std::string corpus;
  std::string classifier;
  double lambda_freq = 1.0;
  double lambda_dist = 1.0;
  double lambda_weight = 1.0;
  double edge_threshold = 0.0;
  std::string weight_formula = "example";
  std::string rc_comparison = "prose";
  std::size_t distance_pair_cap = 10000;
};

struct TreeStatsRow {
  std::string app_id;
  std::string scenario_id;
  TraceStats raw;
  TraceStats pruned;
};

struct Evaluation {
  std::vector<double> precision;  // per component, report order
  double mean = 0.0;
};

struct ComponentReport {
  ConfigEcho config;
  std::size_t apps = 0;
  std::size_t trees = 0;
  TraceStats raw_stats;
  TraceStats pruned_stats;
  std::vector<TreeStatsRow> tree_stats;
  std::size_t graph_vertices = 0;
  std::size_t graph_edges = 0;
  std::vector<Component> components;
  ComponentStats component_stats;
  std::optional<Evaluation> evaluation;
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson stats_json(const TraceStats& s) {
  return ojson{{"nodes", s.nodes},
               {"unique_api_methods", s.unique_api_methods},
               {"height", s.height},
               {"min_repetition", s.min_repetition},
               {"max_repetition", s.max_repetition},
               {"avg_repetition", s.avg_repetition}};
}

inline TraceStats stats_from_json(const ojson& j) {
  TraceStats s;
  s.nodes = j.at("nodes").get<std::size_t>();
  s.unique_api_methods = j.at("unique_api_methods").get<std::size_t>();
  s.height = j.at("height").get<std::size_t>();
  s.min_repetition = j.at("min_repetition").get<std::size_t>();
  s.max_repetition = j.at("max_repetition").get<std::size_t>();
  s.avg_repetition = j.at("avg_repetition").get<double>();
  return s;
}

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += sep;
    out += x;
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ComponentReport& r) {
  using detail::ojson;
  ojson j;
  j["schema"] = kReportSchema;
  j["config"] = ojson{{"corpus", r.config.corpus},
                      {"classifier", r.config.classifier},
                      {"lambda_freq", r.config.lambda_freq},
                      {"lambda_dist", r.config.lambda_dist},
                      {"lambda_weight", r.config.lambda_weight},
                      {"edge_threshold", r.config.edge_threshold},
                      {"weight_formula", r.config.weight_formula},
                      {"rc_comparison", r.config.rc_comparison},
                      {"distance_pair_cap", r.config.distance_pair_cap}};
  j["corpus"] = ojson{{"apps", r.apps}, {"trees", r.trees}};
  ojson trees = ojson::array();
  for (const auto& row : r.tree_stats) {
    trees.push_back(ojson{{"app", row.app_id},
                          {"scenario", row.scenario_id},
                          {"raw", detail::stats_json(row.raw)},
                          {"pruned", detail::stats_json(row.pruned)}});
  }
  j["trace_stats"] = ojson{{"raw", detail::stats_json(r.raw_stats)},
                           {"pruned", detail::stats_json(r.pruned_stats)},
                           {"trees", std::move(trees)}};
  j["graph"] = ojson{{"vertices", r.graph_vertices}, {"edges", r.graph_edges}};
  j["component_stats"] = ojson{{"components", r.component_stats.components},
                               {"avg_interface_methods", r.component_stats.avg_interface_methods},
                               {"avg_classes", r.component_stats.avg_classes},
                               {"empty", r.components.empty()}};
  ojson comps = ojson::array();
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    const auto& c = r.components[i];
    ojson provided = ojson::array();
    for (const auto& m : c.provided_interface) provided.push_back(m.qualified());
    ojson required = ojson::array();
    for (const auto& req : c.required_interface) {
      required.push_back(ojson{{"method", req.method.qualified()},
                               {"owners", req.owners},
                               {"witness",
                                ojson{{"caller", req.witness.caller.qualified()},
                                      {"callee", req.witness.callee.qualified()},
                                      {"app", req.witness.app_id},
                                      {"scenario", req.witness.scenario_id}}}});
    }
    comps.push_back(ojson{{"id", i},
                          {"provided_interface", std::move(provided)},
                          {"implementation_classes", c.implementation_classes},
                          {"required_interface", std::move(required)}});
  }
  j["components"] = std::move(comps);
  if (r.evaluation) {
    j["evaluation"] = ojson{{"precision", r.evaluation->precision}, {"mean", r.evaluation->mean}};
  }
  return j;
}

inline ComponentReport report_from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) {
      throw ConfigError("unsupported report schema " + j.at("schema").get<std::string>());
    }
    ComponentReport r;
    const auto& c = j.at("config");
    r.config.corpus = c.at("corpus").get<std::string>();
    r.config.classifier = c.at("classifier").get<std::string>();
    r.config.lambda_freq = c.at("lambda_freq").get<double>();
    r.config.lambda_dist = c.at("lambda_dist").get<double>();
    r.config.lambda_weight = c.at("lambda_weight").get<double>();
    r.config.edge_threshold = c.at("edge_threshold").get<double>();
    r.config.weight_formula = c.at("weight_formula").get<std::string>();
    r.config.rc_comparison = c.at("rc_comparison").get<std::string>();
    r.config.distance_pair_cap = c.at("distance_pair_cap").get<std::size_t>();
    r.apps = j.at("corpus").at("apps").get<std::size_t>();
    r.trees = j.at("corpus").at("trees").get<std::size_t>();
    const auto& ts = j.at("trace_stats");
    r.raw_stats = detail::stats_from_json(ts.at("raw"));
    r.pruned_stats = detail::stats_from_json(ts.at("pruned"));
    for (const auto& row : ts.at("trees")) {
      r.tree_stats.push_back({row.at("app").get<std::string>(), row.at("scenario").get<std::string>(),
                              detail::stats_from_json(row.at("raw")),
                              detail::stats_from_json(row.at("pruned"))});
    }
    r.graph_vertices = j.at("graph").at("vertices").get<std::size_t>();
    r.graph_edges = j.at("graph").at("edges").get<std::size_t>();
    const auto& cs = j.at("component_stats");
    r.component_stats.components = cs.at("components").get<std::size_t>();
    r.component_stats.avg_interface_methods = cs.at("avg_interface_methods").get<double>();
    r.component_stats.avg_classes = cs.at("avg_classes").get<double>();
    for (const auto& jc : j.at("components")) {
      Component comp;
      for (const auto& m : jc.at("provided_interface")) comp.provided_interface.insert(MethodRef::parse(m.get<std::string>()));
      for (const auto& cls : jc.at("implementation_classes")) comp.implementation_classes.insert(cls.get<std::string>());
      for (const auto& req : jc.at("required_interface")) {
        const auto& w = req.at("witness");
        comp.required_interface.push_back(
            {MethodRef::parse(req.at("method").get<std::string>()),
             {MethodRef::parse(w.at("caller").get<std::string>()),
              MethodRef::parse(w.at("callee").get<std::string>()), w.at("app").get<std::string>(),
              w.at("scenario").get<std::string>()},
             req.at("owners").get<std::vector<std::size_t>>()});
      }
      r.components.push_back(std::move(comp));
    }
    if (j.contains("evaluation")) {
      const auto& e = j.at("evaluation");
      r.evaluation = Evaluation{e.at("precision").get<std::vector<double>>(), e.at("mean").get<double>()};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

inline std::string to_json_text(const ComponentReport& r) { return to_json(r).dump(2) + "\n"; }

inline std::string to_text(const ComponentReport& r) {
  using detail::fixed;
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  auto stats_row = [&](const char* label, const TraceStats& s) {
    line(std::string(label) + "\t" + std::to_string(s.nodes) + "\t" + std::to_string(s.unique_api_methods) +
         "\t" + std::to_string(s.height) + "\t" + std::to_string(s.min_repetition) + "\t" +
         std::to_string(s.max_repetition) + "\t" + fixed(s.avg_repetition, 1));
  };

  line("API component report");
  line("");
  line("[config]");
  line("corpus = " + r.config.corpus);
  line("classifier = " + (r.config.classifier.empty() ? std::string("(none)") : r.config.classifier));
  line("lambda = " + fixed(r.config.lambda_freq, 3) + " " + fixed(r.config.lambda_dist, 3) + " " +
       fixed(r.config.lambda_weight, 3));
  line("edge_threshold = " + fixed(r.config.edge_threshold, 3));
  line("weight_formula = " + r.config.weight_formula);
  line("rc_comparison = " + r.config.rc_comparison);
  line("distance_pair_cap = " + std::to_string(r.config.distance_pair_cap));
  line("");
  line("[trace stats]");
  line("apps = " + std::to_string(r.apps) + ", trees = " + std::to_string(r.trees));
  line("stage\tnodes\tunique_api\theight\tmin_rep\tmax_rep\tavg_rep");
  stats_row("raw", r.raw_stats);
  stats_row("pruned", r.pruned_stats);
  line("");
  line("[graph]");
  line("vertices = " + std::to_string(r.graph_vertices) + ", edges = " + std::to_string(r.graph_edges));
  line("");
  line("[component stats]");
  if (r.components.empty()) {
    line("(no components)");
  } else {
    line("components = " + std::to_string(r.component_stats.components));
    line("avg_interface_methods = " + fixed(r.component_stats.avg_interface_methods, 2));
    line("avg_classes = " + fixed(r.component_stats.avg_classes, 2));
  }
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    const auto& c = r.components[i];
    line("");
    line("[component " + std::to_string(i) + "]");
    std::vector<std::string> provided;
    for (const auto& m : c.provided_interface) provided.push_back(m.qualified());
    line("provided (" + std::to_string(provided.size()) + "): " + detail::join(provided, ", "));
    line("classes (" + std::to_string(c.implementation_classes.size()) + "): " +
         detail::join({c.implementation_classes.begin(), c.implementation_classes.end()}, ", "));
    if (c.required_interface.empty()) {
      line("required: (none)");
    } else {
      line("required:");
      for (const auto& req : c.required_interface) {
        std::vector<std::string> owners;
        for (auto o : req.owners) owners.push_back(std::to_string(o));
        line("  " + req.method.qualified() + "  via " + req.witness.caller.qualified() + " in " +
             req.witness.app_id + "/" + req.witness.scenario_id +
             (owners.empty() ? std::string() : "  owners: " + detail::join(owners, ",")));
      }
    }
    if (r.evaluation && i < r.evaluation->precision.size()) {
      line("precision = " + fixed(r.evaluation->precision[i], 4));
    }
  }
  if (r.evaluation) {
    line("");
    line("[evaluation]");
    line("mean precision = " + fixed(r.evaluation->mean, 4));
  }
  return out;
}

}  // namespace apicomp
