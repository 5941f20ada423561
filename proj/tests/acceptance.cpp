// Acceptance checks: one PASS/FAIL/BLOCKED line per criterion.
// Exit status counts failures that are not listed in --expect-fail.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "bundle_fixture.hpp"
#include "gcatlab/harness.hpp"
#include "gcatlab/kernels.hpp"
#include "oracles.hpp"

using namespace gcatlab;
using namespace gcatlab::test;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, blocked };

struct Outcome {
  int id;
  Verdict verdict;
  std::string title;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

void log(const std::string& s) {
  std::fprintf(stderr, "  .. %s\n", s.c_str());
  std::fflush(stderr);
}

// Everything the graph-level criteria share: basis, embedding, suite results.
struct GraphRun {
  std::string name;
  bool reference_graph = false;
  Graph g;
  SpectralBasis basis;
  EmbeddingMatrix embedding;
  SuiteResult suite;
};

Outcome criterion1(const GraphRun& run) {
  double worst = 0.0;
  long worst_k = 0;
  for (const auto& set : {kLowFrequencyIndices, kHighFrequencyIndices})
    for (long k : set) {
      const auto v = select_eigenvector(run.basis, k);
      const std::size_t col = k >= 0 ? static_cast<std::size_t>(k) : run.basis.size() - static_cast<std::size_t>(-k);
      const double lambda = run.basis.eigenvalues[col];
      const double err = std::abs(dirichlet_energy(run.g, v) - lambda) / std::max(std::abs(lambda), 1e-300);
      if (err > worst) worst = err, worst_k = k;
    }

  // Reconstruction on a 20×25 grid (N = 500).
  const Graph small = grid_graph(20, 25);
  const DenseMatrix l = laplacian(small);
  const auto b = eigendecompose(l);
  const std::size_t n = l.rows();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b.eigenvectors(i, k) * b.eigenvalues[k] * b.eigenvectors(j, k);
      num += (s - l(i, j)) * (s - l(i, j));
      den += l(i, j) * l(i, j);
    }
  const double recon = std::sqrt(num / den);
  const bool ok = worst < 1e-7 && recon < 1e-6;
  return {1, ok ? Verdict::pass : Verdict::fail, "spectral identities",
          fmt("max rel |S2(v_k) - λ_k| = %.2e at k=%ld over 20 indices; reconstruction %.2e at N=500", worst, worst_k,
              recon)};
}

Outcome criterion2(const GraphRun& run) {
  std::size_t cells = 0, within = 0, c3 = 0, c3_strict = 0, failed = 0;
  std::string first_violation, first_error;
  for (const auto& c : run.suite.cells) {
    ++cells;
    if (!c.ok) {
      ++failed;
      if (first_error.empty()) first_error = c.error;
      continue;
    }
    if (c.gcat_mi >= c.gconv_mi - 0.02) ++within;
    else if (first_violation.empty())
      first_violation = fmt("%s opt%d (%ld,%ld): %.4f vs %.4f", to_string(c.case_id).c_str(), c.option, c.x_param,
                            c.y_param, c.gcat_mi, c.gconv_mi);
    if (c.case_id == CaseId::c3) {
      ++c3;
      c3_strict += c.gcat_mi >= c.gconv_mi + 0.05 ? 1 : 0;
    }
  }
  const double strict_frac = c3 ? static_cast<double>(c3_strict) / static_cast<double>(c3) : 0.0;
  const bool ok = failed == 0 && within == cells && strict_frac >= 0.8;
  std::string detail = fmt("%zu/%zu cells within 0.02 nats; Case 3 strict margin in %zu/%zu (%.0f%%)", within, cells,
                           c3_strict, c3, 100.0 * strict_frac);
  if (!first_violation.empty()) detail += "; first violation " + first_violation;
  if (failed) detail += fmt("; %zu cells failed (%s)", failed, first_error.c_str());
  return {2, ok ? Verdict::pass : Verdict::fail, "MI of GCat >= MI of GConv", detail};
}

Outcome criterion3(const GraphRun& run) {
  std::size_t cells = 0, holds = 0;
  double worst_gap = 0.0;
  std::string worst;
  for (const auto& c : run.suite.cells) {
    if (c.case_id != CaseId::c3 && c.case_id != CaseId::c4_1) continue;
    ++cells;
    if (c.ok && c.gcat_fisher >= c.gconv_fisher) {
      ++holds;
      continue;
    }
    const double gap = c.ok ? (c.gconv_fisher - c.gcat_fisher) / std::max(c.gconv_fisher, 1e-300) : 1.0;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst = fmt("%s opt%d x=%ld: GCat %.4g vs GConv %.4g", to_string(c.case_id).c_str(), c.option, c.x_param,
                  c.gcat_fisher, c.gconv_fisher);
    }
  }
  std::string detail = fmt("holds in %zu/%zu Case 3 and 4-1 cells", holds, cells);
  if (!worst.empty()) detail += fmt("; largest shortfall %.1f%% (%s)", 100.0 * worst_gap, worst.c_str());
  return {3, holds == cells ? Verdict::pass : Verdict::fail, "Fisher of GCat >= Fisher of GConv", detail};
}

Outcome criterion4(const GraphRun& run) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : run.suite.cells)
    if (c.case_id == CaseId::c1 && c.ok) {
      sum += std::abs(c.gcat_mi - c.gconv_mi) / c.gconv_mi;
      ++n;
    }
  const double mean = n ? sum / static_cast<double>(n) : HUGE_VAL;
  return {4, mean <= 0.10 ? Verdict::pass : Verdict::fail, "Case 1 MI near-parity",
          fmt("mean relative MI gap %.4f over %zu cells (limit 0.10)", mean, n)};
}

Outcome criterion5(const GraphRun& run) {
  auto acc = [&](const std::string& dataset, const std::string& method) {
    for (const auto& r : run.suite.accuracy)
      if (r.dataset == dataset && r.method == method) return r.acc_mean;
    return std::nan("");
  };
  const double c3_gcat = acc("3_opt1", "gcat_lr"), c3_gconv = acc("3_opt1", "gconv_lr");
  const double c1_gcat = acc("1_opt1", "gcat_lr"), c1_gconv = acc("1_opt1", "gconv_lr");
  const double c4_gcat = acc("4_1_opt2", "gcat_lr");
  bool ok;
  if (run.reference_graph) {
    auto near = [](double a, double target) { return std::abs(a - target) <= 0.05; };
    ok = near(c3_gcat, 0.889) && near(c3_gconv, 0.49) && near(c1_gcat, 0.892) && near(c1_gconv, 0.947) &&
         near(c4_gcat, 0.999);
  } else {
    ok = c3_gcat >= 0.80 && c3_gconv <= 0.60 && c1_gcat >= 0.80 && c1_gconv >= 0.80 && c4_gcat >= 0.98;
  }
  return {5, ok ? Verdict::pass : Verdict::fail, "classification bars",
          fmt("%sCase 3/1 GCat+LR %.3f GConv+LR %.3f; Case 1 GCat+LR %.3f GConv+LR %.3f; Case 4-1/2 GCat+LR %.3f",
              run.reference_graph ? "±0.05 of reference; " : "", c3_gcat, c3_gconv, c1_gcat, c1_gconv, c4_gcat)};
}

Outcome criterion6(const GraphRun& run, std::uint64_t seed) {
  const std::size_t n = run.g.num_nodes();
  auto features = [&](std::size_t f) {
    Rng rng = make_rng(derive_seed(seed, 6, f));
    DenseMatrix x(n, f);
    for (double& v : x.values()) v = uniform01(rng);
    return x;
  };
  const auto x1 = features(1), x10 = features(10);
  // GCat concatenates the structure embedding it classifies with; GConv multiplies by dense Â.
  const auto e10 = time_transform_comparison(run.g, x10, 100, run.embedding);
  // Concatenating the N-wide rows of Â itself, for reference.
  const auto a10 = time_transform_comparison(run.g, x10, 100);

  const double ratio = e10.gconv_dense.mean_s / e10.gcat.mean_s;

  // F-dependence: alternate the widths round by round so drift in machine load
  // hits both alike, then compare medians against a MAD-based spread.
  const DenseMatrix a_dense = normalized_adjacency(run.g).to_dense();
  std::vector<double> cat1, cat10, conv1, conv10;
  DenseMatrix out_a, out_b, out_c, out_d;
  auto once = [](const auto& fn) {
    const auto t = std::chrono::steady_clock::now();
    fn();
    return seconds_since(t);
  };
  for (int r = 0; r < 100 + kTimingWarmups; ++r) {
    const double t1 = once([&] { kernels::hconcat(run.embedding, x1, out_a); });
    const double t2 = once([&] { kernels::hconcat(run.embedding, x10, out_b); });
    const double t3 = once([&] { kernels::gemm(a_dense, x1, out_c); });
    const double t4 = once([&] { kernels::gemm(a_dense, x10, out_d); });
    if (r < kTimingWarmups) continue;
    cat1.push_back(t1);
    cat10.push_back(t2);
    conv1.push_back(t3);
    conv10.push_back(t4);
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  auto spread = [&](const std::vector<double>& v) {
    const double m = median(v);
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - m);
    return 1.4826 * median(dev);
  };
  auto pooled = [&](const std::vector<double>& u, const std::vector<double>& v) {
    return std::sqrt(0.5 * (spread(u) * spread(u) + spread(v) * spread(v)));
  };
  const double cat1_med = median(cat1), cat10_med = median(cat10);
  const double conv1_med = median(conv1), conv10_med = median(conv10);
  const bool cat_flat = std::abs(cat10_med - cat1_med) <= std::max(0.25 * cat1_med, 2.0 * pooled(cat1, cat10));
  const bool conv_grows = conv10_med - conv1_med > 2.0 * pooled(conv1, conv10);
  const bool ok = ratio >= 3.0 && cat_flat && conv_grows;
  return {6, ok ? Verdict::pass : Verdict::fail, "GCat versus GConv timing",
          fmt("F=10: dense GConv %.2f ms, GCat[emb %zu|X] %.3f ms, ratio %.1f; GCat median F=1→10 %.3f→%.3f ms (%s); "
              "GConv median F=1→10 %.2f→%.2f ms (%s); for reference GCat[Â|X] %.2f ms (ratio %.2f), sparse GConv %.3f ms",
              e10.gconv_dense.mean_s * 1e3, run.embedding.cols(), e10.gcat.mean_s * 1e3, ratio, cat1_med * 1e3,
              cat10_med * 1e3, cat_flat ? "flat" : "not flat", conv1_med * 1e3, conv10_med * 1e3, conv_grows ? "grows" : "does not grow", a10.gcat.mean_s * 1e3,
              a10.gconv_dense.mean_s / a10.gcat.mean_s, e10.gconv_sparse.mean_s * 1e3)};
}

struct RealTarget {
  std::string name;
  double gcat_lo, gcat_hi, gcn_lo, gcn_hi;
};

std::optional<fs::path> find_bundle(const std::string& name, const std::string& root) {
  std::string upper = name;
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(ch));
  if (const char* env = std::getenv(("GCATLAB_" + upper + "_DIR").c_str())) return fs::path(env);
  for (const fs::path base : {fs::path(root), fs::path(GCATLAB_DATA_DIR)})
    if (!base.empty() && fs::exists(base / name / "nodes.csv")) return base / name;
  return std::nullopt;
}

Outcome criterion7(const std::string& data_root, std::uint64_t seed) {
  // Reference means ±3 points.
  const std::vector<RealTarget> targets{{"cora", 0.829, 0.889, 0.837, 0.897},
                                        {"citeseer", 0.7072, 0.7672, 0.7012, 0.7612},
                                        {"pubmed", 0.8360, 0.8960, 0.8422, 0.9022}};
  std::string detail;
  bool any = false, ok = true;
  for (const auto& t : targets) {
    const auto dir = find_bundle(t.name, data_root);
    if (!dir) continue;
    any = true;
    log("criterion 7: " + t.name + " from " + dir->string());
    const Dataset d = ingest_citation_dataset(*dir);
    BenchmarkConfig cfg;
    cfg.split.seed = seed;
    cfg.embedding.walks.seed = derive_seed(seed, 0xD33B);
    cfg.embedding.skipgram.seed = derive_seed(seed, 0x5C1B);
    const auto gcat = run_benchmark(d, Method::gcat_lr, cfg);
    const auto gcn = run_benchmark(d, Method::gcn, cfg);
    const bool acc_ok = gcat.acc_mean >= t.gcat_lo && gcat.acc_mean <= t.gcat_hi && gcn.acc_mean >= t.gcn_lo &&
                        gcn.acc_mean <= t.gcn_hi;
    const bool time_ok = gcat.time_ms_mean() < gcn.time_ms_mean();
    ok = ok && acc_ok && time_ok;
    detail += fmt("%s%s GCat+LR %.2f±%.2f GCN %.2f±%.2f, time %.1f vs %.1f ms", detail.empty() ? "" : "; ",
                  t.name.c_str(), 100 * gcat.acc_mean, 100 * gcat.acc_std, 100 * gcn.acc_mean, 100 * gcn.acc_std,
                  gcat.time_ms_mean(), gcn.time_ms_mean());
  }
  if (!any)
    return {7, Verdict::blocked, "real-world accuracy",
            "no citation bundle found (set GCATLAB_CORA_DIR or place nodes.csv/edges.csv under data/cora)"};
  return {7, ok ? Verdict::pass : Verdict::fail, "real-world accuracy", detail};
}

Outcome criterion8() {
  // Exhaustive: every {0,1,2}-valued column of length 6 against two label patterns.
  double worst = 0.0;
  std::size_t checked = 0;
  const std::vector<std::vector<int>> labelings{{0, 0, 0, 1, 1, 1}, {0, 1, 2, 0, 1, 2}};
  for (const auto& lab : labelings) {
    const LabelVector y(lab);
    for (int code = 0; code < 729; ++code) {
      std::vector<double> x(6);
      for (int i = 0, c = code; i < 6; ++i, c /= 3) x[static_cast<std::size_t>(i)] = c % 3;
      worst = std::max(worst, std::abs(mutual_information_column(x, y, 6) - exhaustive_mi(x, lab)));
      ++checked;
    }
  }
  // Random integer columns, N from 2 to 12.
  Rng rng = make_rng(8);
  for (int t = 0; t < 4000; ++t) {
    const std::size_t n = 2 + uniform_index(rng, 11);
    const int classes = 2 + static_cast<int>(uniform_index(rng, 3));
    std::vector<double> x(n);
    std::vector<int> lab(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(uniform_index(rng, 1 + uniform_index(rng, 6)));
      lab[i] = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(classes)));
    }
    worst = std::max(worst, std::abs(mutual_information_column(x, LabelVector(lab, classes), static_cast<int>(n)) -
                                     exhaustive_mi(x, lab)));
    ++checked;
  }
  const LabelVector y({0, 0, 1, 1, 2, 2, 2, 0});
  std::vector<double> ycol(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) ycol[i] = y[i];
  const double self_gap = std::abs(mutual_information_column(ycol, y, static_cast<int>(y.size())) - discrete_entropy(y));
  const double fisher = fisher_score_column(std::vector<double>{0, 1, 2, 3}, LabelVector({0, 0, 1, 1}));
  const bool ok = worst <= 1e-12 && self_gap <= 1e-12 && std::abs(fisher - 8.0) <= 1e-9;
  return {8, ok ? Verdict::pass : Verdict::fail, "estimator oracles",
          fmt("max |MI - exhaustive| = %.1e over %zu inputs; |I(Y;Y) - H(Y)| = %.1e; Fisher fixture %.12f", worst,
              checked, self_gap, fisher)};
}

Outcome criterion9() {
  Rng rng = make_rng(9);
  auto random = [&](std::size_t r, std::size_t c) {
    DenseMatrix m(r, c);
    for (double& v : m.values()) v = uniform_real(rng, -1.0, 1.0);
    return m;
  };
  const auto a = normalized_adjacency(six_node_graph());
  const auto x = random(6, 3);
  const LabelVector y({0, 0, 1, 1, 2, 2});
  const double gcn = gcn_gradient_error(a, x, y, {0, 2, 3, 5}, random(3, 4), random(4, 3), 5e-4);
  const auto zs = random(6, 3);
  const double lr = logreg_gradient_error(zs, {0, 0, 1, 1, 2, 2}, random(3, 3), {0.1, -0.2, 0.3}, 1.0 / 6.0);
  return {9, gcn < 1e-4 && lr < 1e-4 ? Verdict::pass : Verdict::fail, "gradient checks",
          fmt("6-node fixture: logreg max rel error %.1e, GCN max rel error %.1e", lr, gcn)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_without_timing(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::string line, out;
  while (std::getline(in, line)) {
    // The last two columns are the timing mean and std.
    for (int k = 0; k < 2; ++k) line = line.substr(0, line.rfind(','));
    out += line + '\n';
  }
  return out;
}

std::string json_without_timing(const fs::path& p) {
  auto j = nlohmann::ordered_json::parse(read_file(p));
  for (auto& r : j["results"]) r.erase("timing");
  return j.dump();
}

Outcome criterion10(const std::string& cli, const fs::path& work) {
  if (cli.empty() || !fs::exists(cli)) return {10, Verdict::fail, "determinism", "CLI binary not found: " + cli};
  const fs::path bundle = work / "determinism_bundle";
  write_planted_bundle(bundle, 400, 3, 40, 77, 0.03, 0.002);
  std::vector<std::pair<std::string, std::string>> outputs;
  for (int run = 0; run < 2; ++run) {
    const fs::path out = work / ("determinism_run" + std::to_string(run));
    fs::remove_all(out);
    const std::string cmd = "GCATLAB_THREADS=1 '" + cli + "' bench --seed 7 --repeats 3 --dim 64 --dataset-dir '" +
                            bundle.string() + "' --out '" + out.string() + "' > '" + (work / "bench.log").string() +
                            "' 2>&1";
    if (std::system(cmd.c_str()) != 0)
      return {10, Verdict::fail, "determinism", "bench run failed; see " + (work / "bench.log").string()};
    outputs.emplace_back(csv_without_timing(out / "report.csv"), json_without_timing(out / "report.json"));
  }
  const bool csv_same = outputs[0].first == outputs[1].first;
  const bool json_same = outputs[0].second == outputs[1].second;
  return {10, csv_same && json_same ? Verdict::pass : Verdict::fail, "determinism",
          fmt("two single-threaded `bench --seed 7` runs: CSV %s, JSON %s (timing fields excluded)",
              csv_same ? "identical" : "differ", json_same ? "identical" : "differ")};
}

const char* label(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::blocked: return "BLOCKED";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  CLI::App app{"Acceptance criteria"};
  std::string graph_path, cli, data_root, work = "acceptance_work";
  std::uint64_t seed = 1;
  std::vector<int> only, expect_fail;
  app.add_option("--graph", graph_path, "Edge list; default is the 50x50 grid");
  app.add_option("--cli", cli, "Path to the gcatlab binary");
  app.add_option("--data-root", data_root, "Directory holding cora/, citeseer/, pubmed/ bundles");
  app.add_option("--work", work, "Scratch directory (eigenbasis cache, CLI runs)")->capture_default_str();
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--expect-fail", expect_fail, "Criteria whose FAIL does not affect the exit status");
  CLI11_PARSE(app, argc, argv);

  const fs::path work_dir = work;
  fs::create_directories(work_dir);
  auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  std::vector<Outcome> outcomes;
  auto report = [&](Outcome o) {
    std::printf("%-7s criterion %-2d %s: %s\n", label(o.verdict), o.id, o.title.c_str(), o.detail.c_str());
    std::fflush(stdout);
    outcomes.push_back(std::move(o));
  };
  auto guarded = [&](int id, const std::string& title, const std::function<Outcome()>& fn) {
    if (!wanted(id)) return;
    try {
      report(fn());
    } catch (const std::exception& e) {
      report({id, Verdict::fail, title, std::string("error: ") + e.what()});
    }
  };

  const bool needs_graph = wanted(1) || wanted(2) || wanted(3) || wanted(4) || wanted(5) || wanted(6);
  GraphRun run;
  if (needs_graph) {
    try {
      auto t = std::chrono::steady_clock::now();
      run.g = graph_path.empty() ? grid_graph(50, 50) : load_edge_list(graph_path);
      run.name = graph_path.empty() ? "grid 50x50" : fs::path(graph_path).stem().string();
      run.reference_graph = run.name == "minnesota";
      const DenseMatrix lap = laplacian(run.g);
      const std::uint64_t laplacian_hash = content_hash(lap);
      run.basis = eigendecompose_cached(lap, work_dir / "cache");
      log(fmt("%s: N=%zu, eigenbasis %.1f s", run.name.c_str(), run.g.num_nodes(), seconds_since(t)));
      if (wanted(2) || wanted(3) || wanted(4) || wanted(5) || wanted(6)) {
        t = std::chrono::steady_clock::now();
        DeepWalkParams dw;
        dw.walks.seed = derive_seed(seed, 0xD33B);
        dw.skipgram.seed = derive_seed(seed, 0x5C1B);
        const auto cached = work_dir / "cache" /
                            fmt("embedding_%016llx_%llu_%d.tsv", static_cast<unsigned long long>(laplacian_hash),
                                static_cast<unsigned long long>(seed), dw.skipgram.dim);
        const bool hit = fs::exists(cached);
        if (hit) {
          run.embedding = load_embedding_tsv(cached);
        } else {
          run.embedding = deepwalk(run.g, dw);
          save_embedding_tsv(run.embedding, cached);
        }
        log(fmt("DeepWalk-%zu %.1f s%s", run.embedding.cols(), seconds_since(t), hit ? " (cache)" : ""));
      }
      if (wanted(2) || wanted(3) || wanted(4) || wanted(5)) {
        t = std::chrono::steady_clock::now();
        SuiteConfig cfg;
        cfg.seed = seed;
        cfg.split.seed = seed;
        cfg.run_accuracy = wanted(5);
        run.suite = run_synthetic_suite(run.g, run.basis, run.embedding, experiment_case_grids(run.g.num_nodes()), cfg);
        log(fmt("synthetic suite: %zu cells, %zu accuracy rows, %.1f s", run.suite.cells.size(),
                run.suite.accuracy.size(), seconds_since(t)));
      }
    } catch (const std::exception& e) {
      for (int id = 1; id <= 6; ++id)
        if (wanted(id)) report({id, Verdict::fail, "graph setup", std::string("error: ") + e.what()});
      run.g = Graph();
    }
  }
  if (run.g.num_nodes() > 0) {
    guarded(1, "spectral identities", [&] { return criterion1(run); });
    guarded(2, "MI of GCat >= MI of GConv", [&] { return criterion2(run); });
    guarded(3, "Fisher of GCat >= Fisher of GConv", [&] { return criterion3(run); });
    guarded(4, "Case 1 MI near-parity", [&] { return criterion4(run); });
    guarded(5, "classification bars", [&] { return criterion5(run); });
    guarded(6, "GCat versus GConv timing", [&] { return criterion6(run, seed); });
  }
  guarded(7, "real-world accuracy", [&] { return criterion7(data_root, seed); });
  guarded(8, "estimator oracles", [] { return criterion8(); });
  guarded(9, "gradient checks", [] { return criterion9(); });
  guarded(10, "determinism", [&] { return criterion10(cli, work_dir); });

  int passed = 0, failed = 0, blocked = 0, unexpected = 0;
  for (const auto& o : outcomes) {
    passed += o.verdict == Verdict::pass;
    blocked += o.verdict == Verdict::blocked;
    if (o.verdict == Verdict::fail) {
      ++failed;
      if (std::find(expect_fail.begin(), expect_fail.end(), o.id) == expect_fail.end()) ++unexpected;
    }
  }
  std::printf("summary: %d passed, %d failed (%d unexpected), %d blocked\n", passed, failed, unexpected, blocked);
  return unexpected == 0 ? 0 : 1;
}
