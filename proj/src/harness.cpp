#include "gcatlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gcatlab/error.hpp"
#include "gcatlab/kernels.hpp"
#include "gcatlab/rng.hpp"

namespace gcatlab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_split_spec(const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ValidationError("split: train_fraction must be in (0, 1)");
  if (spec.repeats < 1) throw ValidationError("split: repeats must be >= 1");
}

Split draw_split(std::size_t n, double fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed);
  shuffle(std::span<std::size_t>(order), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::uint64_t split_seed(const SplitSpec& spec, int repeat_index, int attempt) {
  return derive_seed(spec.seed, static_cast<std::uint64_t>(repeat_index), static_cast<std::uint64_t>(attempt));
}

bool covers_classes(const LabelVector& y, std::span<const std::size_t> train) {
  std::vector<char> seen(static_cast<std::size_t>(y.num_classes()), 0);
  for (std::size_t i : train) seen[static_cast<std::size_t>(y[i])] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

bool blank_or_comment(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

std::uint64_t method_tag(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void finalize(ExperimentResult& r) {
  std::tie(r.acc_mean, r.acc_std) = mean_std(r.accuracies);
}

nlohmann::ordered_json logreg_json(const LogregConfig& c) {
  return {{"l2", c.l2}, {"l2_rule", c.l2 < 0 ? "1/n_train" : "fixed"}, {"max_iter", c.max_iter},
          {"tol", c.tol}, {"standardize", true}};
}
nlohmann::ordered_json svm_json(const SvmConfig& c) {
  return {{"l2", c.l2}, {"epochs", c.epochs}, {"standardize", true}};
}
nlohmann::ordered_json gcn_json(const GcnConfig& c) {
  return {{"hidden", c.hidden}, {"dropout", c.dropout}, {"epochs", c.epochs},
          {"lr", c.lr},         {"weight_decay", c.weight_decay}};
}
nlohmann::ordered_json split_json(const SplitSpec& s) {
  return {{"train_fraction", s.train_fraction}, {"seed", s.seed}, {"repeats", s.repeats}, {"stratified", false}};
}
nlohmann::ordered_json deepwalk_json(const DeepWalkParams& p) {
  return {{"walks_per_node", p.walks.walks_per_node}, {"walk_length", p.walks.walk_length},
          {"walk_seed", p.walks.seed},                {"dim", p.skipgram.dim},
          {"window", p.skipgram.window},              {"negatives", p.skipgram.negatives},
          {"epochs", p.skipgram.epochs},              {"lr", p.skipgram.lr},
          {"skipgram_seed", p.skipgram.seed},         {"threads", p.skipgram.threads}};
}

/// Restores the OpenMP thread cap on scope exit.
class ThreadScope {
 public:
  explicit ThreadScope(int n) : saved_(kernels::max_threads()) {
    if (n > 0) kernels::set_threads(n);
  }
  ~ThreadScope() { kernels::set_threads(saved_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  int saved_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Splits

Split split(std::size_t n, const SplitSpec& spec, int repeat_index) {
  check_split_spec(spec);
  if (n < 5) throw ValidationError("split: need at least 5 rows, got " + std::to_string(n));
  return draw_split(n, spec.train_fraction, split_seed(spec, repeat_index, 0));
}

Split split_covering_classes(const LabelVector& y, const SplitSpec& spec, int repeat_index) {
  check_split_spec(spec);
  if (y.size() < 5) throw ValidationError("split: need at least 5 rows, got " + std::to_string(y.size()));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Split s = draw_split(y.size(), spec.train_fraction, split_seed(spec, repeat_index, attempt));
    if (covers_classes(y, s.train)) {
      s.redraws = attempt;
      return s;
    }
  }
  throw ValidationError("split: could not place every class in the training rows after 1000 draws");
}

// ---------------------------------------------------------------------------
// Ingestion

Dataset ingest_citation_dataset(const std::filesystem::path& dir) {
  const auto nodes_path = dir / "nodes.csv";
  const auto edges_path = dir / "edges.csv";
  const auto node_lines = read_lines(nodes_path);
  const auto edge_lines = read_lines(edges_path);

  Dataset d;
  d.name = dir.filename().string();
  if (d.name.empty()) d.name = dir.parent_path().filename().string();

  std::unordered_map<std::string, std::uint32_t> index;
  std::unordered_map<std::string, int> class_index;
  std::vector<int> labels;
  std::vector<double> feats;
  std::size_t num_features = 0;
  bool first = true;

  for (std::size_t ln = 0; ln < node_lines.size(); ++ln) {
    const std::string& line = node_lines[ln];
    if (blank_or_comment(line)) continue;
    const auto fields = split_csv_line(line);
    const std::string where = nodes_path.string() + ":" + std::to_string(ln + 1);
    if (fields.size() < 3) throw ParseError(where + ": expected id,label,features...");
    std::vector<double> row(fields.size() - 2);
    bool numeric = true;
    std::size_t bad = 0;
    for (std::size_t j = 2; j < fields.size(); ++j) {
      if (!parse_double(fields[j], row[j - 2])) {
        numeric = false;
        bad = j;
        break;
      }
    }
    if (!numeric) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw ParseError(where + ": non-numeric feature '" + fields[bad] + "' in column " + std::to_string(bad + 1));
    }
    first = false;
    if (num_features == 0) num_features = row.size();
    if (row.size() != num_features)
      throw ParseError(where + ": expected " + std::to_string(num_features) + " features, got " +
                       std::to_string(row.size()));
    if (fields[0].empty()) throw ParseError(where + ": empty node id");
    const auto id = static_cast<std::uint32_t>(d.node_ids.size());
    if (!index.emplace(fields[0], id).second) throw ValidationError(where + ": duplicate node id '" + fields[0] + "'");
    d.node_ids.push_back(fields[0]);
    auto [it, inserted] = class_index.emplace(fields[1], static_cast<int>(d.class_names.size()));
    if (inserted) d.class_names.push_back(fields[1]);
    labels.push_back(it->second);
    feats.insert(feats.end(), row.begin(), row.end());
  }
  const std::size_t n = d.node_ids.size();
  if (n == 0) throw ValidationError(nodes_path.string() + ": no nodes");

  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::size_t records = 0;
  first = true;
  for (std::size_t ln = 0; ln < edge_lines.size(); ++ln) {
    const std::string& line = edge_lines[ln];
    if (blank_or_comment(line)) continue;
    const auto fields = split_csv_line(line);
    const std::string where = edges_path.string() + ":" + std::to_string(ln + 1);
    if (fields.size() != 2) throw ParseError(where + ": expected u,v");
    const auto iu = index.find(fields[0]);
    const auto iv = index.find(fields[1]);
    if (first && iu == index.end() && iv == index.end()) {  // header row
      first = false;
      continue;
    }
    first = false;
    if (iu == index.end()) throw ValidationError(where + ": edge references unknown node id '" + fields[0] + "'");
    if (iv == index.end()) throw ValidationError(where + ": edge references unknown node id '" + fields[1] + "'");
    ++records;
    std::uint32_t u = iu->second, v = iv->second;
    if (u == v) {
      ++d.dropped_self_loops;
      continue;
    }
    if (u > v) std::swap(u, v);
    pairs.emplace(u, v);
  }
  d.merged_duplicate_edges = records - d.dropped_self_loops - pairs.size();

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
  d.graph = Graph::from_edges(n, edges);

  d.x = DenseMatrix(n, num_features);
  std::copy(feats.begin(), feats.end(), d.x.values().begin());
  d.y = LabelVector(std::move(labels), std::max<int>(2, static_cast<int>(d.class_names.size())));
  return d;
}

// ---------------------------------------------------------------------------
// Results

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / n)};
}

double ExperimentResult::time_ms_mean() const { return mean_std(reported_ms).first; }
double ExperimentResult::time_ms_std() const { return mean_std(reported_ms).second; }

// ---------------------------------------------------------------------------
// Synthetic suite

std::string CaseGrid::name() const {
  return to_string(case_id) + "_opt" + std::to_string(option);
}

std::vector<CaseGrid> experiment_case_grids(std::size_t num_nodes) {
  const std::vector<long> low(kLowFrequencyIndices.begin(), kLowFrequencyIndices.end());
  const std::vector<long> high(kHighFrequencyIndices.begin(), kHighFrequencyIndices.end());
  std::vector<long> points;
  for (long k : kPointCounts)
    if (k < static_cast<long>(num_nodes)) points.push_back(k);

  std::vector<CaseGrid> grids;
  grids.push_back({CaseId::c1, 1, low, {0}});
  grids.push_back({CaseId::c2, 1, low, high});
  grids.push_back({CaseId::c2, 2, low, points});
  grids.push_back({CaseId::c3, 1, high, low});
  grids.push_back({CaseId::c3, 2, points, low});
  grids.push_back({CaseId::c4_1, 1, high, {0}});
  grids.push_back({CaseId::c4_1, 2, points, {0}});
  return grids;
}

CellResult evaluate_cell(const Graph& g, const SpectralBasis& basis, const DenseMatrix& repr, const ScenarioSpec& spec,
                         int bins) {
  CellResult c;
  c.case_id = spec.case_id;
  c.option = spec.option;
  c.x_param = spec.x_param;
  c.y_param = spec.y_param;
  try {
    const Scenario s = generate_scenario(g, basis, spec);
    const TransformComparison cmp = compare_transforms(g, s.x, s.y, repr, bins);
    c.gconv_fisher = cmp.gconv.fisher_aggregate;
    c.gcat_fisher = cmp.gcat.fisher_aggregate;
    c.gconv_mi = cmp.gconv.mi_aggregate;
    c.gcat_mi = cmp.gcat.mi_aggregate;
    c.feature_energy = s.feature_energy;
    c.label_energy = s.label_energy;
    c.ok = true;
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

std::vector<ExperimentResult> run_accuracy_case(const Graph& g, const SpectralBasis& basis, const DenseMatrix& repr,
                                                const ScenarioSpec& spec, const SuiteConfig& cfg,
                                                const std::string& label) {
  check_split_spec(cfg.split);
  const Scenario s = generate_scenario(g, basis, spec);
  const NormalizedAdjacency a = normalized_adjacency(g);
  const DenseMatrix z_gcat = gcat(repr, s.x).data;
  const DenseMatrix z_gconv = gconv(a, s.x).data;

  const std::vector<std::string> names = {"gcat_lr", "gcat_svm", "gconv_lr", "gconv_svm", "gcn"};
  std::vector<ExperimentResult> out(names.size());
  for (std::size_t m = 0; m < names.size(); ++m) {
    out[m].method = names[m];
    out[m].dataset = label;
    nlohmann::ordered_json conf = {{"case", to_string(spec.case_id)},
                                   {"option", spec.option},
                                   {"x_param", spec.x_param},
                                   {"y_param", spec.y_param},
                                   {"scenario_seed", spec.seed},
                                   {"split", split_json(cfg.split)},
                                   {"repr_width", repr.cols()}};
    if (names[m].ends_with("_lr")) conf["logreg"] = logreg_json(cfg.logreg);
    if (names[m].ends_with("_svm")) conf["svm"] = svm_json(cfg.svm);
    if (names[m] == "gcn") conf["gcn"] = gcn_json(cfg.gcn);
    out[m].config = std::move(conf);
  }

  for (int r = 0; r < cfg.split.repeats; ++r) {
    const Split sp = split_covering_classes(s.y, cfg.split, r);
    for (std::size_t m = 0; m < names.size(); ++m) {
      const std::uint64_t seed = derive_seed(cfg.seed, method_tag(names[m]), static_cast<std::uint64_t>(r));
      const auto t0 = Clock::now();
      LabelVector pred;
      if (names[m] == "gcn") {
        GcnConfig gc = cfg.gcn;
        gc.seed = seed;
        const GcnModel model = train_gcn(a, s.x, s.y, sp.train, gc);
        out[m].train_ms.push_back(ms_since(t0));
        pred = gcn_predict(model, a, s.x);
      } else {
        const DenseMatrix& z = names[m].starts_with("gcat") ? z_gcat : z_gconv;
        LinearModel model;
        if (names[m].ends_with("_lr")) {
          LogregConfig lc = cfg.logreg;
          lc.seed = seed;
          model = train_logreg(z, s.y, sp.train, lc);
        } else {
          SvmConfig sc = cfg.svm;
          sc.seed = seed;
          model = train_linear_svm(z, s.y, sp.train, sc);
        }
        out[m].train_ms.push_back(ms_since(t0));
        pred = predict(model, z);
      }
      out[m].transform_ms.push_back(0.0);
      out[m].reported_ms.push_back(out[m].train_ms.back());
      out[m].total_ms.push_back(out[m].train_ms.back());
      out[m].split_redraws.push_back(sp.redraws);
      out[m].accuracies.push_back(evaluate(pred, s.y, sp.test));
    }
  }
  for (auto& r : out) finalize(r);
  return out;
}

SuiteResult run_synthetic_suite(const Graph& g, const SpectralBasis& basis, const DenseMatrix& repr,
                                const std::vector<CaseGrid>& grids, const SuiteConfig& cfg) {
  SuiteResult res;
  std::vector<ScenarioSpec> specs;
  std::vector<std::size_t> grid_of;
  for (std::size_t gi = 0; gi < grids.size(); ++gi) {
    const CaseGrid& grid = grids[gi];
    if (grid.x_values.empty() || grid.y_values.empty())
      throw ValidationError("run_synthetic_suite: empty grid " + grid.name());
    std::size_t cell = 0;
    for (long xv : grid.x_values) {
      for (long yv : grid.y_values) {
        specs.push_back({grid.case_id, grid.option, xv, yv, derive_seed(cfg.seed, gi + 1, cell++)});
        grid_of.push_back(gi);
      }
    }
  }

  res.cells.resize(specs.size());
  const auto n = static_cast<std::ptrdiff_t>(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    res.cells[static_cast<std::size_t>(i)] = evaluate_cell(g, basis, repr, specs[static_cast<std::size_t>(i)], cfg.bins);

  std::size_t offset = 0;
  for (const CaseGrid& grid : grids) {
    const std::size_t nx = grid.x_values.size(), ny = grid.y_values.size();
    const std::array<std::pair<const char*, double CellResult::*>, 4> fields = {{
        {"gconv_fisher", &CellResult::gconv_fisher},
        {"gcat_fisher", &CellResult::gcat_fisher},
        {"gconv_mi", &CellResult::gconv_mi},
        {"gcat_mi", &CellResult::gcat_mi},
    }};
    for (const auto& [fname, member] : fields) {
      SurfaceGrid s{grid.name() + "_" + fname, grid.x_values, grid.y_values, DenseMatrix(nx, ny)};
      for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
          const CellResult& c = res.cells[offset + i * ny + j];
          s.z(i, j) = c.ok ? c.*member : std::nan("");
        }
      res.surfaces.push_back(std::move(s));
    }
    offset += nx * ny;
  }

  if (cfg.run_accuracy) {
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
      const CaseGrid& grid = grids[gi];
      const std::size_t xi = std::min(cfg.bar_index, grid.x_values.size() - 1);
      const std::size_t yi = std::min(cfg.bar_index, grid.y_values.size() - 1);
      const ScenarioSpec spec{grid.case_id, grid.option, grid.x_values[xi], grid.y_values[yi],
                              derive_seed(cfg.seed, gi + 1, xi * grid.y_values.size() + yi)};
      auto rs = run_accuracy_case(g, basis, repr, spec, cfg, grid.name());
      for (auto& r : rs) res.accuracy.push_back(std::move(r));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Benchmark

std::string to_string(Method m) {
  switch (m) {
    case Method::gcat_lr: return "gcat_lr";
    case Method::gcn: return "gcn";
    case Method::sgc_lr: return "sgc_lr";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "gcat_lr") return Method::gcat_lr;
  if (s == "gcn") return Method::gcn;
  if (s == "sgc_lr") return Method::sgc_lr;
  throw ValidationError("unknown method '" + s + "' (expected gcat_lr, gcn or sgc_lr)");
}

ExperimentResult run_benchmark(const Dataset& data, Method method, const BenchmarkConfig& cfg,
                               const EmbeddingMatrix* embedding) {
  check_split_spec(cfg.split);
  if (data.x.rows() != data.graph.num_nodes() || data.y.size() != data.graph.num_nodes())
    throw ValidationError("run_benchmark: dataset shapes disagree");
  const ThreadScope threads(cfg.timing_threads);

  ExperimentResult r;
  r.method = to_string(method);
  r.dataset = data.name;
  nlohmann::ordered_json conf = {{"split", split_json(cfg.split)}, {"timing_threads", cfg.timing_threads}};

  EmbeddingMatrix computed;
  const EmbeddingMatrix* emb = embedding;
  if (method == Method::gcat_lr) {
    if (emb == nullptr) {
      const auto t0 = Clock::now();
      computed = deepwalk(data.graph, cfg.embedding);
      r.embedding_ms = ms_since(t0);
      emb = &computed;
    }
    if (emb->rows() != data.graph.num_nodes())
      throw ValidationError("run_benchmark: embedding has " + std::to_string(emb->rows()) + " rows, graph has " +
                            std::to_string(data.graph.num_nodes()) + " nodes");
    conf["embedding"] = deepwalk_json(cfg.embedding);
    conf["embedding"]["precomputed"] = embedding != nullptr;
    conf["logreg"] = logreg_json(cfg.logreg);
  } else if (method == Method::sgc_lr) {
    conf["sgc_k"] = cfg.sgc_k;
    conf["logreg"] = logreg_json(cfg.logreg);
  } else {
    conf["gcn"] = gcn_json(cfg.gcn);
  }
  r.config = std::move(conf);

  const NormalizedAdjacency a = normalized_adjacency(data.graph);
  for (int rep = 0; rep < cfg.split.repeats; ++rep) {
    const Split sp = split_covering_classes(data.y, cfg.split, rep);
    const std::uint64_t seed = derive_seed(cfg.split.seed, method_tag(r.method), static_cast<std::uint64_t>(rep));
    LabelVector pred;
    double transform_ms = 0.0, train_ms = 0.0;
    if (method == Method::gcn) {
      GcnConfig gc = cfg.gcn;
      gc.seed = seed;
      const auto t0 = Clock::now();
      const GcnModel model = train_gcn(a, data.x, data.y, sp.train, gc);
      train_ms = ms_since(t0);
      pred = gcn_predict(model, a, data.x);
    } else {
      auto t0 = Clock::now();
      const DenseMatrix z = method == Method::gcat_lr ? gcat(*emb, data.x).data : sgc_transform(a, data.x, cfg.sgc_k).data;
      transform_ms = ms_since(t0);
      LogregConfig lc = cfg.logreg;
      lc.seed = seed;
      t0 = Clock::now();
      const LinearModel model = train_logreg(z, data.y, sp.train, lc);
      train_ms = ms_since(t0);
      pred = predict(model, z);
    }
    r.transform_ms.push_back(transform_ms);
    r.train_ms.push_back(train_ms);
    r.reported_ms.push_back(transform_ms + train_ms);
    r.total_ms.push_back(transform_ms + train_ms + r.embedding_ms);
    r.split_redraws.push_back(sp.redraws);
    r.accuracies.push_back(evaluate(pred, data.y, sp.test));
  }
  finalize(r);
  return r;
}

// ---------------------------------------------------------------------------
// Timing

TimingStats time_calls(const std::function<void()>& fn, int trials, int warmups) {
  if (trials < 1) throw ValidationError("time_calls: trials must be >= 1");
  for (int i = 0; i < warmups; ++i) fn();
  TimingStats st;
  st.samples_s.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    const auto t0 = Clock::now();
    fn();
    st.samples_s.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  std::tie(st.mean_s, st.std_s) = mean_std(st.samples_s);
  return st;
}

TransformTiming time_transform_comparison(const Graph& g, const FeatureMatrix& x, int trials,
                                          const DenseMatrix& repr) {
  if (trials < 10) throw ValidationError("time_transform_comparison: trials must be >= 10");
  if (x.rows() != g.num_nodes()) throw ValidationError("time_transform_comparison: X rows must equal N");
  if (!repr.empty() && repr.rows() != g.num_nodes())
    throw ValidationError("time_transform_comparison: representation rows must equal N");

  const NormalizedAdjacency a = normalized_adjacency(g);
  const DenseMatrix a_dense = a.to_dense();
  const DenseMatrix& structure = repr.empty() ? a_dense : repr;

  TransformTiming t;
  t.trials = trials;
  t.warmups = kTimingWarmups;
  t.repr_width = structure.cols();

  // Outputs are allocated once; every call rewrites all entries.
  DenseMatrix out_dense, out_sparse, out_cat;
  t.gconv_dense = time_calls([&] { kernels::gemm(a_dense, x, out_dense); }, trials);
  t.gconv_sparse = time_calls([&] { kernels::spmm(a.matrix(), x, out_sparse); }, trials);
  t.gcat = time_calls([&] { kernels::hconcat(structure, x, out_cat); }, trials);
  return t;
}

// ---------------------------------------------------------------------------
// Emission

void emit_surface(const SurfaceGrid& grid, const std::filesystem::path& path) {
  if (grid.z.rows() != grid.x_values.size() || grid.z.cols() != grid.y_values.size())
    throw ValidationError("emit_surface: z is " + std::to_string(grid.z.rows()) + "x" + std::to_string(grid.z.cols()) +
                          ", grids are " + std::to_string(grid.x_values.size()) + "x" +
                          std::to_string(grid.y_values.size()));
  if (!grid.z.all_finite()) throw ValidationError("emit_surface: grid '" + grid.name + "' has missing or non-finite cells");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[64];
  for (std::size_t i = 0; i < grid.x_values.size(); ++i) {
    if (i > 0) out << '\n';
    for (std::size_t j = 0; j < grid.y_values.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", grid.z(i, j));
      out << grid.x_values[i] << ' ' << grid.y_values[j] << ' ' << buf << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

SurfaceGrid read_surface(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<std::vector<std::pair<long, double>>> groups(1);
  std::vector<long> xs;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string t = trim(lines[ln]);
    if (t.empty()) {
      if (!groups.back().empty()) groups.emplace_back();
      continue;
    }
    std::istringstream is(t);
    long xv = 0, yv = 0;
    std::string zs;
    double z = 0.0;
    if (!(is >> xv >> yv >> zs) || !parse_double(zs, z))
      throw ParseError(path.string() + ":" + std::to_string(ln + 1) + ": expected 'x y z'");
    if (groups.back().empty()) xs.push_back(xv);
    groups.back().emplace_back(yv, z);
  }
  if (groups.back().empty()) groups.pop_back();
  if (groups.empty()) throw ParseError(path.string() + ": empty surface");

  SurfaceGrid s;
  s.name = path.stem().string();
  s.x_values = xs;
  for (const auto& [yv, z] : groups.front()) s.y_values.push_back(yv);
  s.z = DenseMatrix(groups.size(), s.y_values.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].size() != s.y_values.size()) throw ParseError(path.string() + ": ragged surface groups");
    for (std::size_t j = 0; j < groups[i].size(); ++j) s.z(i, j) = groups[i][j].second;
  }
  return s;
}

nlohmann::ordered_json to_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["dataset"] = r.dataset;
  j["acc_mean"] = r.acc_mean;
  j["acc_std"] = r.acc_std;
  j["std_convention"] = "population";
  j["accuracies"] = r.accuracies;
  j["split_redraws"] = r.split_redraws;
  j["config"] = r.config;
  j["timing"] = {{"time_ms_mean", r.time_ms_mean()}, {"time_ms_std", r.time_ms_std()},
                 {"reported_ms", r.reported_ms},      {"transform_ms", r.transform_ms},
                 {"train_ms", r.train_ms},            {"embedding_ms", r.embedding_ms},
                 {"total_ms", r.total_ms}};
  return j;
}

nlohmann::ordered_json to_json(const CellResult& c) {
  nlohmann::ordered_json j = {{"case", to_string(c.case_id)}, {"option", c.option},
                              {"x_param", c.x_param},         {"y_param", c.y_param},
                              {"ok", c.ok}};
  if (c.ok) {
    j["gconv_fisher"] = c.gconv_fisher;
    j["gcat_fisher"] = c.gcat_fisher;
    j["gconv_mi"] = c.gconv_mi;
    j["gcat_mi"] = c.gcat_mi;
    j["feature_energy"] = c.feature_energy;
    j["label_energy"] = c.label_energy;
  } else {
    j["error"] = c.error;
  }
  return j;
}

void emit_report(const std::vector<ExperimentResult>& results, const std::filesystem::path& csv_path) {
  if (results.empty()) throw ValidationError("emit_report: no results");
  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot write " + csv_path.string());
  out << kReportColumns << '\n';
  char buf[256];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", r.acc_mean, r.acc_std, r.time_ms_mean(),
                  r.time_ms_std());
    out << r.method << ',' << r.dataset << ',' << buf << '\n';
  }
  if (!out) throw IoError("write failed: " + csv_path.string());

  nlohmann::ordered_json j;
  j["columns"] = kReportColumns;
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : results) j["results"].push_back(to_json(r));
  auto json_path = csv_path;
  json_path.replace_extension(".json");
  std::ofstream js(json_path);
  if (!js) throw IoError("cannot write " + json_path.string());
  js << j.dump(2) << '\n';
  if (!js) throw IoError("write failed: " + json_path.string());
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::ordered_json& manifest) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace gcatlab
