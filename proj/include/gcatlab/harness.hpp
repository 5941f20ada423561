#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcatlab/analysis.hpp"
#include "gcatlab/embedding.hpp"
#include "gcatlab/graph.hpp"
#include "gcatlab/learn.hpp"
#include "gcatlab/spectral.hpp"
#include "gcatlab/synth.hpp"

namespace gcatlab {

struct SplitSpec {
  double train_fraction = 0.6;
  std::uint64_t seed = 0;
  int repeats = 10;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  int redraws = 0;  // sub-seed increments needed to get every class into train
};

/// Uniform shuffle seeded by (seed, repeat_index); the first floor(f·n) go to train.
Split split(std::size_t n, const SplitSpec& spec, int repeat_index);

/// split() re-drawn with an incremented sub-seed until every class has a
/// training row (at most 1000 attempts).
Split split_covering_classes(const LabelVector& y, const SplitSpec& spec, int repeat_index);

struct Dataset {
  std::string name;
  Graph graph;
  FeatureMatrix x;
  LabelVector y;
  std::vector<std::string> node_ids;     // original id per row
  std::vector<std::string> class_names;  // original label per class index
  std::size_t dropped_self_loops = 0;
  std::size_t merged_duplicate_edges = 0;
};

/// Reads <dir>/nodes.csv ("id,label,f1..fF", optional header) and
/// <dir>/edges.csv ("u,v", optional header). Labels are re-encoded in order of
/// first appearance; edges are symmetrized and de-duplicated.
Dataset ingest_citation_dataset(const std::filesystem::path& dir);

struct ExperimentResult {
  std::string method;
  std::string dataset;
  std::vector<double> accuracies;
  double acc_mean = 0.0;
  double acc_std = 0.0;  // population convention
  std::vector<double> reported_ms;   // the per-method training-time accounting
  std::vector<double> transform_ms;  // feature transform part (concat or propagation)
  std::vector<double> train_ms;      // classifier fit
  double embedding_ms = 0.0;         // one-off structure embedding, if any
  std::vector<double> total_ms;      // reported + embedding
  std::vector<int> split_redraws;
  nlohmann::ordered_json config;

  double time_ms_mean() const;
  double time_ms_std() const;
};

/// Population mean and standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& v);

// ---------------------------------------------------------------------------
// Synthetic suite

/// Parameter grid for one case/option; cells are the Cartesian product.
struct CaseGrid {
  CaseId case_id = CaseId::c1;
  int option = 1;
  std::vector<long> x_values;
  std::vector<long> y_values;  // {0} for cases without a y parameter

  std::string name() const;  // e.g. "case_3_opt1"
};

/// The grids used for the figures, restricted to point counts below num_nodes.
std::vector<CaseGrid> experiment_case_grids(std::size_t num_nodes);

struct CellResult {
  CaseId case_id = CaseId::c1;
  int option = 1;
  long x_param = 0;
  long y_param = 0;
  bool ok = false;
  std::string error;
  double gconv_fisher = 0.0;
  double gcat_fisher = 0.0;
  double gconv_mi = 0.0;
  double gcat_mi = 0.0;
  double feature_energy = 0.0;
  double label_energy = 0.0;
};

struct SurfaceGrid {
  std::string name;
  std::vector<long> x_values;
  std::vector<long> y_values;
  DenseMatrix z;  // |x| × |y|
};

struct SuiteConfig {
  int bins = kDefaultBins;
  SplitSpec split;
  std::uint64_t seed = 0;
  /// Index into each grid's value lists for the accuracy bars (clamped).
  std::size_t bar_index = 4;
  bool run_accuracy = true;
  LogregConfig logreg;
  SvmConfig svm;
  GcnConfig gcn;
};

struct SuiteResult {
  std::vector<CellResult> cells;
  std::vector<SurfaceGrid> surfaces;
  std::vector<ExperimentResult> accuracy;
};

/// One scenario cell: generate, transform, score. Failures are captured in the result.
CellResult evaluate_cell(const Graph& g, const SpectralBasis& basis, const DenseMatrix& repr, const ScenarioSpec& spec,
                         int bins);

/// Accuracy of {GCat+LR, GCat+SVM, GConv+LR, GConv+SVM, GCN} on one scenario over repeats.
std::vector<ExperimentResult> run_accuracy_case(const Graph& g, const SpectralBasis& basis, const DenseMatrix& repr,
                                                const ScenarioSpec& spec, const SuiteConfig& cfg,
                                                const std::string& label);

SuiteResult run_synthetic_suite(const Graph& g, const SpectralBasis& basis, const DenseMatrix& repr,
                                const std::vector<CaseGrid>& grids, const SuiteConfig& cfg);

// ---------------------------------------------------------------------------
// Real-world benchmark

enum class Method { gcat_lr, gcn, sgc_lr };
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct BenchmarkConfig {
  SplitSpec split;
  DeepWalkParams embedding;
  LogregConfig logreg;
  GcnConfig gcn;
  int sgc_k = 2;
  /// Threads while timing; the comparison is made single-threaded.
  int timing_threads = 1;
};

/// Repeats split → fit → evaluate → time. `embedding` may be supplied to skip
/// recomputation (its time is then reported as 0).
ExperimentResult run_benchmark(const Dataset& data, Method method, const BenchmarkConfig& cfg,
                               const EmbeddingMatrix* embedding = nullptr);

// ---------------------------------------------------------------------------
// Timing

struct TimingStats {
  double mean_s = 0.0;
  double std_s = 0.0;
  std::vector<double> samples_s;
};

struct TransformTiming {
  TimingStats gconv_dense;   // Â (dense) · X, the O(N²F) product
  TimingStats gconv_sparse;  // CSR Â · X
  TimingStats gcat;          // materialized [repr | X]
  int trials = 0;
  int warmups = 0;
  std::size_t repr_width = 0;
};

inline constexpr int kDefaultTimingTrials = 100;
inline constexpr int kTimingWarmups = 5;

/// Wall-clock statistics per call, warm-ups excluded. With an empty `repr`
/// the dense rows of Â are the structure representation.
TransformTiming time_transform_comparison(const Graph& g, const FeatureMatrix& x, int trials = kDefaultTimingTrials,
                                          const DenseMatrix& repr = {});

/// Mean/std wall time of fn over trials after warm-ups.
TimingStats time_calls(const std::function<void()>& fn, int trials, int warmups = kTimingWarmups);

// ---------------------------------------------------------------------------
// Emission

/// "x y z" lines grouped by constant x, blank line between groups, %.17g.
void emit_surface(const SurfaceGrid& grid, const std::filesystem::path& path);
SurfaceGrid read_surface(const std::filesystem::path& path);

inline constexpr const char* kReportColumns = "method,dataset,acc_mean,acc_std,time_ms_mean,time_ms_std";

/// CSV with kReportColumns plus a JSON sidecar (path with .json extension)
/// holding configs and per-repeat values.
void emit_report(const std::vector<ExperimentResult>& results, const std::filesystem::path& csv_path);

nlohmann::ordered_json to_json(const ExperimentResult& r);
nlohmann::ordered_json to_json(const CellResult& c);

/// Writes <dir>/manifest.json.
void write_manifest(const std::filesystem::path& dir, const nlohmann::ordered_json& manifest);

}  // namespace gcatlab
