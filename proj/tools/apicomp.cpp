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

// apicomp: identify API components from execution-trace call trees.
//
//   generate  write a synthetic corpus with planted components
//   prune     strip application frames from every trace of a corpus
//   metrics   score method sets (CSV)
//   graph     build the weighted API graph (edge list + DOT)
//   cluster   overlapping star clustering of an edge list
//   run       the whole pipeline, writing the component report
//   evaluate  precision of a report's components against relatedness labels
//
// Exit codes: 0 success, 1 usage/config error, 2 parse error, 3 empty corpus.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apicomp/clusterer.hpp"
#include "apicomp/component.hpp"
#include "apicomp/errors.hpp"
#include "apicomp/graph_builder.hpp"
#include "apicomp/metrics.hpp"
#include "apicomp/pipeline.hpp"
#include "apicomp/pruner.hpp"
#include "apicomp/report.hpp"
#include "apicomp/synth_corpus.hpp"
#include "apicomp/trace_model.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitEmpty = 3;

struct EmptyCorpus {};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw apicomp::ConfigError("cannot write " + path.string());
  out << text;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

// Options shared by every subcommand that scores methods.
struct ScoringOptions {
  std::string corpus;
  std::string classifier;
  double lambda_freq = 1.0;
  double lambda_dist = 1.0;
  double lambda_weight = 1.0;
  double edge_threshold = 0.0;
  std::string weight_formula = "example";
  std::string rc_comparison = "prose";
  std::size_t distance_pair_cap = 10000;
  std::size_t jobs = 1;

  void add_corpus(CLI::App* cmd) {
    cmd->add_option("--corpus", corpus, "Corpus directory (one subdirectory per application)")
        ->required();
    cmd->add_option("--classifier", classifier, "API prefix file (one prefix per line)");
    cmd->add_option("--jobs", jobs, "Worker threads, 0 = all cores")->capture_default_str();
  }

  void add_weights(CLI::App* cmd) {
    cmd->add_option("--lambda-freq", lambda_freq, "Weight of call frequency")->capture_default_str();
    cmd->add_option("--lambda-dist", lambda_dist, "Weight of call distance")->capture_default_str();
    cmd->add_option("--lambda-weight", lambda_weight, "Weight of call weight")->capture_default_str();
    cmd->add_option("--weight-formula", weight_formula, "Per-pair call weight averaging")
        ->check(CLI::IsMember({"example", "literal"}))
        ->capture_default_str();
    cmd->add_option("--distance-pair-cap", distance_pair_cap,
                    "Max occurrence pairs per tree for average distance")
        ->capture_default_str();
  }

  void add_threshold(CLI::App* cmd) {
    cmd->add_option("--edge-threshold", edge_threshold, "Drop edges with weight below this")
        ->capture_default_str();
  }

  void add_rc(CLI::App* cmd) {
    cmd->add_option("--rc-comparison", rc_comparison, "Relative compactness comparison")
        ->check(CLI::IsMember({"prose", "caption"}))
        ->capture_default_str();
  }

  apicomp::RunConfig run_config() const {
    apicomp::RunConfig cfg;
    cfg.corpus = corpus;
    cfg.classifier = classifier;
    cfg.weights = {lambda_freq, lambda_dist, lambda_weight};
    cfg.edge_threshold = edge_threshold;
    cfg.weight_formula =
        weight_formula == "literal" ? apicomp::WeightFormula::kLiteral : apicomp::WeightFormula::kExample;
    cfg.rc_comparison =
        rc_comparison == "caption" ? apicomp::RcComparison::kCaption : apicomp::RcComparison::kProse;
    cfg.distance_pair_cap = distance_pair_cap;
    cfg.jobs = jobs;
    return cfg;
  }

  // Loaded, classified, and pruned corpus.
  apicomp::TraceCorpus pruned_corpus() const {
    const auto cfg = run_config();
    cfg.validate();
    auto raw = apicomp::load_corpus(cfg.corpus, jobs);
    if (raw.empty()) throw EmptyCorpus{};
    return apicomp::prune(apicomp::classify(std::move(raw), apicomp::load_classifier(cfg.classifier)));
  }
};

std::string format_double(double v) { return apicomp::format_weight(v); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<apicomp::MethodRef>> read_sets(const fs::path& path) {
  const auto text = apicomp::detail::read_file(path);
  return apicomp::read_clusters(text, path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify reusable components of an object-oriented API from execution traces"};
  app.require_subcommand(1);
  ScoringOptions opts;

  // generate
  apicomp::PlantSpec plant;
  std::string generate_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus with planted components");
  generate->add_option("--out", generate_out, "Output corpus directory")->required();
  generate->add_option("--components", plant.component_count, "Planted components")->capture_default_str();
  generate->add_option("--methods-min", plant.methods_min, "Min methods per component")->capture_default_str();
  generate->add_option("--methods-max", plant.methods_max, "Max methods per component")->capture_default_str();
  generate->add_option("--inter-call-prob", plant.inter_call_probability,
                       "Probability a scenario calls another component")
      ->capture_default_str();
  generate->add_option("--trees-per-app", plant.trees_per_app, "Scenarios per application")->capture_default_str();
  generate->add_option("--apps", plant.apps, "Client applications")->capture_default_str();
  generate->add_option("--depth-min", plant.depth_min, "Min call-tree height")->capture_default_str();
  generate->add_option("--depth-max", plant.depth_max, "Max call-tree height")->capture_default_str();
  generate->add_option("--noise-prob", plant.noise_probability, "Per-frame noise call probability")
      ->capture_default_str();
  generate->add_option("--seed", plant.seed, "64-bit seed")->capture_default_str();

  // prune
  std::string prune_out;
  auto* prune = app.add_subcommand("prune", "Remove application frames from every trace");
  opts.add_corpus(prune);
  prune->add_option("--out", prune_out, "Output corpus directory")->required();

  // metrics
  std::string sets_path;
  std::string metrics_out;
  auto* metrics = app.add_subcommand("metrics", "Score method sets; CSV with one row per set");
  opts.add_corpus(metrics);
  opts.add_weights(metrics);
  metrics->add_option("--sets", sets_path, "One comma-separated method set per line")->required();
  metrics->add_option("--out", metrics_out, "CSV output file (default stdout)");

  // graph
  std::string graph_out;
  auto* graph = app.add_subcommand("graph", "Build the weighted API graph");
  opts.add_corpus(graph);
  opts.add_weights(graph);
  opts.add_threshold(graph);
  graph->add_option("--out", graph_out, "Output directory for graph.tsv and graph.dot")->required();

  // cluster
  std::string graph_in;
  std::string cluster_out;
  auto* cluster = app.add_subcommand("cluster", "Overlapping clustering of an edge-list graph");
  cluster->add_option("--graph", graph_in, "Edge list written by 'graph'")->required();
  cluster->add_option("--out", cluster_out, "Cluster file (default stdout)");
  opts.add_rc(cluster);

  // run
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run the whole pipeline and write the component report");
  opts.add_corpus(run);
  opts.add_weights(run);
  opts.add_threshold(run);
  opts.add_rc(run);
  run->add_option("--out", run_out, "Report directory")->required();

  // evaluate
  std::string report_in;
  std::string labels_in;
  std::string evaluate_out;
  auto* evaluate = app.add_subcommand("evaluate", "Precision of a report's provided interfaces");
  evaluate->add_option("--report", report_in, "report.json written by 'run'")->required();
  evaluate->add_option("--labels", labels_in, "Related method pairs, 'a.C.m<TAB>b.D.n' per line")->required();
  evaluate->add_option("--out", evaluate_out, "Directory for the updated report (default: report's directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) {
      const auto synth = apicomp::generate(plant);
      apicomp::write_synth_corpus(generate_out, synth);
      std::cout << "wrote " << synth.corpus.tree_count() << " traces for " << synth.ground_truth.size()
                << " planted components to " << generate_out << "\n";
    } else if (*prune) {
      const auto pruned = opts.pruned_corpus();
      apicomp::write_corpus(prune_out, pruned);
      std::cout << "pruned " << pruned.tree_count() << " traces into " << prune_out << "\n";
    } else if (*metrics) {
      const auto cfg = opts.run_config();
      const auto sets = read_sets(sets_path);
      const apicomp::CorpusIndex index(opts.pruned_corpus(), cfg.graph_config().metrics);
      std::string csv = "set,call_freq,call_dist,call_weight,quality\n";
      for (const auto& set : sets) {
        const auto a = apicomp::set_affinity(set, index, cfg.weights);
        std::string name;
        for (const auto& m : set) name += (name.empty() ? "" : ",") + m.qualified();
        csv += csv_quote(name) + "," + format_double(a.call_freq) + "," + format_double(a.call_dist) + "," +
               format_double(a.call_weight) + "," + format_double(a.quality) + "\n";
      }
      emit(metrics_out, csv);
    } else if (*graph) {
      const auto cfg = opts.run_config();
      const auto g = apicomp::build_graph(opts.pruned_corpus(), cfg.graph_config());
      write_text(fs::path(graph_out) / "graph.tsv", apicomp::write_edge_list(g));
      write_text(fs::path(graph_out) / "graph.dot", apicomp::write_dot(g));
      std::cout << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
    } else if (*cluster) {
      const auto g = apicomp::read_edge_list(apicomp::detail::read_file(graph_in), graph_in);
      apicomp::ClusterConfig ccfg;
      ccfg.rc_comparison = opts.run_config().rc_comparison;
      emit(cluster_out, apicomp::write_clusters(apicomp::cluster_methods(g, apicomp::cluster(g, ccfg))));
    } else if (*run) {
      auto cfg = opts.run_config();
      cfg.out = run_out;
      const auto res = apicomp::run_pipeline(cfg);
      std::cout << apicomp::to_text(res.report);
      if (res.empty_corpus) {
        std::cerr << "empty corpus: no trace files under " << cfg.corpus.string() << "\n";
        return kExitEmpty;
      }
    } else if (*evaluate) {
      const auto text = apicomp::detail::read_file(report_in);
      nlohmann::ordered_json j;
      try {
        j = nlohmann::ordered_json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw apicomp::ParseError(report_in, 0, e.what());
      }
      auto report = apicomp::report_from_json(j);
      const auto labels =
          apicomp::RelatednessLabels::parse(apicomp::detail::read_file(labels_in), labels_in);
      report.evaluation = apicomp::evaluate(report, labels);
      const fs::path dir = evaluate_out.empty() ? fs::path(report_in).parent_path() : fs::path(evaluate_out);
      std::string summary;
      for (std::size_t i = 0; i < report.evaluation->precision.size(); ++i) {
        summary += "component " + std::to_string(i) + "\t" + apicomp::detail::fixed(report.evaluation->precision[i], 4) + "\n";
      }
      summary += "mean\t" + apicomp::detail::fixed(report.evaluation->mean, 4) +
                 (report.components.empty() ? "\t(no components)" : "") + "\n";
      write_text(dir / "report.json", apicomp::to_json_text(report));
      write_text(dir / "report.txt", apicomp::to_text(report));
      write_text(dir / "evaluation.txt", summary);
      std::cout << summary;
    }
  } catch (const EmptyCorpus&) {
    std::cerr << "empty corpus: no trace files under " << opts.corpus << "\n";
    return kExitEmpty;
  } catch (const apicomp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const apicomp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
