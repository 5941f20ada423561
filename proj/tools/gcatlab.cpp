#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>

#include "gcatlab/error.hpp"
#include "gcatlab/harness.hpp"
#include "gcatlab/kernels.hpp"

using namespace gcatlab;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string graph = "grid:50x50";
  std::string dataset_dir;
  std::uint64_t seed = 0;
  int repeats = 10;
  double train_frac = 0.6;
  int bins = kDefaultBins;
  int dim = 256;
  std::string out = "run";
  std::string cache_dir;
};

void add_common(CLI::App* app, Common& c, bool graph, bool dataset) {
  if (graph) app->add_option("--graph", c.graph, "Edge list file, or grid:RxC")->capture_default_str();
  if (dataset) app->add_option("--dataset-dir", c.dataset_dir, "Directory with nodes.csv and edges.csv");
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--repeats", c.repeats, "Split repeats")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--train-frac", c.train_frac, "Training fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app->add_option("--bins", c.bins, "Quantile bins for MI")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--dim", c.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Run directory")->capture_default_str();
}

Graph load_graph(const std::string& spec) {
  static const std::regex grid(R"(grid:(\d+)x(\d+))");
  std::smatch m;
  if (std::regex_match(spec, m, grid)) return grid_graph(std::stoul(m[1]), std::stoul(m[2]));
  return load_edge_list(spec);
}

std::string graph_name(const std::string& spec) {
  return spec.rfind("grid:", 0) == 0 ? spec : fs::path(spec).stem().string();
}

json common_json(const Common& c) {
  return {{"seed", c.seed},   {"repeats", c.repeats}, {"train_fraction", c.train_frac},
          {"bins", c.bins},   {"dim", c.dim},         {"threads", kernels::max_threads()}};
}

SplitSpec split_spec(const Common& c) { return {c.train_frac, c.seed, c.repeats}; }

DeepWalkParams deepwalk_params(const Common& c) {
  DeepWalkParams p;
  p.walks.seed = derive_seed(c.seed, 0xD33B);
  p.skipgram.seed = derive_seed(c.seed, 0x5C1B);
  p.skipgram.dim = c.dim;
  return p;
}

SpectralBasis basis_for(const Graph& g, const Common& c) {
  return eigendecompose_cached(laplacian(g), c.cache_dir.empty() ? fs::path(c.out) / "cache" : fs::path(c.cache_dir));
}

/// The structure representation: a saved embedding if given, else a fresh DeepWalk run.
EmbeddingMatrix structure_repr(const Graph& g, const Common& c, const std::string& embedding_path) {
  if (!embedding_path.empty()) {
    auto e = load_embedding_tsv(embedding_path);
    if (e.rows() != g.num_nodes())
      throw ValidationError("embedding has " + std::to_string(e.rows()) + " rows, graph has " +
                            std::to_string(g.num_nodes()) + " nodes");
    return e;
  }
  return deepwalk(g, deepwalk_params(c));
}

void print_results(const std::vector<ExperimentResult>& rs) {
  for (const auto& r : rs)
    std::printf("%-12s %-10s acc %.4f ± %.4f  time %.2f ms\n", r.dataset.c_str(), r.method.c_str(), r.acc_mean,
                r.acc_std, r.time_ms_mean());
}

ScenarioSpec scenario_from(const std::string& case_id, int option, long x, long y, std::uint64_t seed) {
  ScenarioSpec s;
  s.case_id = parse_case_id(case_id);
  s.option = option;
  s.x_param = x;
  s.y_param = y;
  s.seed = seed;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  CLI::App app{"gcatlab: graph convolution versus concatenation experiments"};
  app.require_subcommand(1);

  Common c;
  std::string case_id = "1", method = "gcat_lr", embedding_path;
  int option = 1, trials = kDefaultTimingTrials;
  long x_param = 1, y_param = 0;
  bool no_accuracy = false;
  std::vector<int> feature_counts{1, 10};
  std::vector<std::string> methods{"gcat_lr", "gcn", "sgc_lr"};

  auto* synth = app.add_subcommand("synth", "Generate one scenario, or list the experiment grids");
  add_common(synth, c, true, false);
  synth->add_option("--case", case_id, "1, 2, 3 or 4_1");
  synth->add_option("--option", option)->check(CLI::IsMember({1, 2}));
  synth->add_option("--x", x_param, "Feature parameter (eigenvector index or point count)");
  synth->add_option("--y", y_param, "Label parameter");
  synth->add_option("--cache-dir", c.cache_dir, "Eigenbasis cache");

  auto* analyze = app.add_subcommand("analyze", "Fisher and MI reports for raw, GConv and GCat features");
  add_common(analyze, c, true, true);
  analyze->add_option("--case", case_id, "Scenario case when no dataset is given");
  analyze->add_option("--option", option)->check(CLI::IsMember({1, 2}));
  analyze->add_option("--x", x_param);
  analyze->add_option("--y", y_param);
  analyze->add_option("--embedding", embedding_path, "Embedding TSV to use as structure representation");
  analyze->add_option("--cache-dir", c.cache_dir, "Eigenbasis cache");

  auto* embed = app.add_subcommand("embed", "DeepWalk embedding to TSV");
  add_common(embed, c, true, true);

  auto* classify = app.add_subcommand("classify", "One method on a dataset over repeated splits");
  add_common(classify, c, false, true);
  classify->add_option("--method", method, "gcat_lr, gcn or sgc_lr")->capture_default_str();
  classify->add_option("--embedding", embedding_path, "Precomputed embedding TSV for gcat_lr");

  auto* bench = app.add_subcommand("bench", "Accuracy and training-time table for a dataset");
  add_common(bench, c, false, true);
  bench->add_option("--methods", methods, "Methods to run")->capture_default_str();

  auto* timing = app.add_subcommand("timing", "Wall time of GConv versus GCat");
  add_common(timing, c, true, false);
  timing->add_option("--trials", trials)->capture_default_str()->check(CLI::Range(10, 100000));
  timing->add_option("--features", feature_counts, "Feature widths to sweep")->capture_default_str();
  timing->add_option("--embedding", embedding_path, "Structure representation TSV (default: dense Â rows)");

  auto* surface = app.add_subcommand("surface", "Synthetic suite: mesh files, cell table, accuracy bars");
  add_common(surface, c, true, false);
  surface->add_option("--embedding", embedding_path, "Embedding TSV (default: DeepWalk on the graph)");
  surface->add_option("--cache-dir", c.cache_dir, "Eigenbasis cache");
  surface->add_flag("--no-accuracy", no_accuracy, "Skip the classification bars");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out = c.out;
    fs::create_directories(out);
    json manifest = {{"tool", "gcatlab"}, {"version", "0.1.0"}, {"command", app.get_subcommands().front()->get_name()}};
    manifest["common"] = common_json(c);

    if (synth->parsed()) {
      const Graph g = load_graph(c.graph);
      manifest["graph"] = c.graph;
      if (synth->count("--case") == 0) {
        json grids = json::array();
        for (const auto& gr : experiment_case_grids(g.num_nodes()))
          grids.push_back({{"name", gr.name()}, {"x_values", gr.x_values}, {"y_values", gr.y_values}});
        std::ofstream(out / "grids.json") << grids.dump(2) << '\n';
        std::printf("wrote %zu grids to %s\n", grids.size(), (out / "grids.json").c_str());
      } else {
        const auto spec = scenario_from(case_id, option, x_param, y_param, c.seed);
        const Scenario s = generate_scenario(g, basis_for(g, c), spec);
        export_scenario(s, out / "scenario.csv", out / "scenario.json");
        manifest["scenario"] = {{"case", case_id}, {"option", option}, {"x_param", x_param}, {"y_param", y_param}};
        std::printf("S2(X) = %.6g  S2(Y) = %.6g\n", s.feature_energy, s.label_energy);
      }
    } else if (analyze->parsed()) {
      Graph g;
      FeatureMatrix x;
      LabelVector y;
      if (!c.dataset_dir.empty()) {
        Dataset d = ingest_citation_dataset(c.dataset_dir);
        g = std::move(d.graph);
        x = std::move(d.x);
        y = std::move(d.y);
        manifest["dataset_dir"] = c.dataset_dir;
      } else {
        g = load_graph(c.graph);
        const auto spec = scenario_from(case_id, option, x_param, y_param, c.seed);
        Scenario s = generate_scenario(g, basis_for(g, c), spec);
        x = std::move(s.x);
        y = std::move(s.y);
        manifest["graph"] = c.graph;
        manifest["scenario"] = {{"case", case_id}, {"option", option}, {"x_param", x_param}, {"y_param", y_param}};
      }
      const auto repr = structure_repr(g, c, embedding_path);
      const auto raw = dependency_report(x, y, c.bins, "raw");
      const auto cmp = compare_transforms(g, x, y, repr, c.bins);
      for (const auto* r : {&raw, &cmp.gconv, &cmp.gcat}) {
        write_report_kv(*r, out / (r->transform + ".txt"));
        write_report_csv(*r, out / (r->transform + ".csv"));
        std::printf("%-6s fisher %.6g  mi %.6g nats  H(Y) %.6g\n", r->transform.c_str(), r->fisher_aggregate,
                    r->mi_aggregate, r->label_entropy);
      }
    } else if (embed->parsed()) {
      const Graph g = c.dataset_dir.empty() ? load_graph(c.graph) : ingest_citation_dataset(c.dataset_dir).graph;
      const auto params = deepwalk_params(c);
      const auto t0 = std::chrono::steady_clock::now();
      const auto e = deepwalk(g, params);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      save_embedding_tsv(e, out / "embedding.tsv");
      manifest["walk_seed"] = params.walks.seed;
      manifest["skipgram_seed"] = params.skipgram.seed;
      std::printf("embedded %zu nodes in %.1f s\n", e.rows(), secs);
    } else if (classify->parsed() || bench->parsed()) {
      if (c.dataset_dir.empty()) throw ValidationError("--dataset-dir is required");
      const Dataset d = ingest_citation_dataset(c.dataset_dir);
      BenchmarkConfig cfg;
      cfg.split = split_spec(c);
      cfg.embedding = deepwalk_params(c);
      manifest["dataset_dir"] = c.dataset_dir;
      manifest["ingest"] = {{"nodes", d.graph.num_nodes()},
                            {"edges", d.graph.num_edges()},
                            {"dropped_self_loops", d.dropped_self_loops},
                            {"merged_duplicate_edges", d.merged_duplicate_edges}};
      std::vector<ExperimentResult> results;
      if (classify->parsed()) {
        std::optional<EmbeddingMatrix> e;
        if (!embedding_path.empty()) e = load_embedding_tsv(embedding_path);
        results.push_back(run_benchmark(d, parse_method(method), cfg, e ? &*e : nullptr));
      } else {
        for (const auto& m : methods) results.push_back(run_benchmark(d, parse_method(m), cfg));
      }
      emit_report(results, out / "report.csv");
      print_results(results);
    } else if (timing->parsed()) {
      const Graph g = load_graph(c.graph);
      DenseMatrix repr;
      if (!embedding_path.empty()) repr = structure_repr(g, c, embedding_path);
      json rows = json::array();
      std::ofstream csv(out / "timing.csv");
      csv << "features,repr_width,gconv_dense_ms_mean,gconv_dense_ms_std,gconv_sparse_ms_mean,gconv_sparse_ms_std,"
             "gcat_ms_mean,gcat_ms_std\n";
      Rng rng = make_rng(c.seed);
      for (int f : feature_counts) {
        if (f < 1) throw ValidationError("--features must be positive");
        DenseMatrix x(g.num_nodes(), static_cast<std::size_t>(f));
        for (double& v : x.values()) v = uniform01(rng);
        const auto t = time_transform_comparison(g, x, trials, repr);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%d,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", f, t.repr_width,
                      t.gconv_dense.mean_s * 1e3, t.gconv_dense.std_s * 1e3, t.gconv_sparse.mean_s * 1e3,
                      t.gconv_sparse.std_s * 1e3, t.gcat.mean_s * 1e3, t.gcat.std_s * 1e3);
        csv << buf << '\n';
        std::printf("F=%-4d gconv dense %.3f ms  sparse %.3f ms  gcat %.3f ms  ratio %.2f\n", f,
                    t.gconv_dense.mean_s * 1e3, t.gconv_sparse.mean_s * 1e3, t.gcat.mean_s * 1e3,
                    t.gconv_dense.mean_s / t.gcat.mean_s);
        rows.push_back({{"features", f},
                        {"repr_width", t.repr_width},
                        {"gconv_dense_s", t.gconv_dense.samples_s},
                        {"gconv_sparse_s", t.gconv_sparse.samples_s},
                        {"gcat_s", t.gcat.samples_s}});
      }
      std::ofstream(out / "timing.json") << json{{"trials", trials}, {"warmups", kTimingWarmups}, {"runs", rows}}.dump(2)
                                         << '\n';
      manifest["graph"] = c.graph;
      manifest["trials"] = trials;
      manifest["representation"] = embedding_path.empty() ? "dense adjacency rows" : embedding_path;
    } else if (surface->parsed()) {
      const Graph g = load_graph(c.graph);
      const auto basis = basis_for(g, c);
      const auto repr = structure_repr(g, c, embedding_path);
      SuiteConfig cfg;
      cfg.seed = c.seed;
      cfg.bins = c.bins;
      cfg.split = split_spec(c);
      cfg.run_accuracy = !no_accuracy;
      const auto grids = experiment_case_grids(g.num_nodes());
      const auto res = run_synthetic_suite(g, basis, repr, grids, cfg);
      fs::create_directories(out / "surfaces");
      for (const auto& s : res.surfaces) {
        bool complete = true;
        for (double v : s.z.values()) complete = complete && !std::isnan(v);
        if (complete) emit_surface(s, out / "surfaces" / (s.name + ".dat"));
        else std::fprintf(stderr, "skipping %s: grid has failed cells\n", s.name.c_str());
      }
      json cells = json::array();
      std::size_t failed = 0;
      for (const auto& cell : res.cells) {
        cells.push_back(to_json(cell));
        failed += cell.ok ? 0 : 1;
      }
      std::ofstream(out / "cells.json") << cells.dump(2) << '\n';
      if (!res.accuracy.empty()) {
        emit_report(res.accuracy, out / "accuracy.csv");
        print_results(res.accuracy);
      }
      manifest["graph"] = c.graph;
      manifest["graph_name"] = graph_name(c.graph);
      manifest["grids"] = grids.size();
      manifest["cells"] = res.cells.size();
      manifest["failed_cells"] = failed;
      std::printf("%zu cells (%zu failed), %zu surfaces\n", res.cells.size(), failed, res.surfaces.size());
    }
    write_manifest(out, manifest);
    return 0;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
