#include "gcatlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "gcatlab/error.hpp"

namespace gcatlab {
namespace {

void check_aligned(std::size_t n, const LabelVector& y, const char* op) {
  if (n != y.size())
    throw ValidationError(std::string(op) + ": " + std::to_string(n) + " values but " + std::to_string(y.size()) +
                          " labels");
}

double max_or_zero(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double mean_or_zero(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

template <class Fn>
ColumnScores per_column(const DenseMatrix& z, Fn&& score) {
  ColumnScores out;
  out.per_column.assign(z.cols(), 0.0);
  const auto k = static_cast<std::ptrdiff_t>(z.cols());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < k; ++j) out.per_column[static_cast<std::size_t>(j)] = score(z.col(static_cast<std::size_t>(j)));
  out.aggregate = max_or_zero(out.per_column);
  out.mean = mean_or_zero(out.per_column);
  return out;
}

}  // namespace

double fisher_score_column(std::span<const double> values, const LabelVector& y) {
  check_aligned(values.size(), y, "fisher_score_column");
  const auto c = static_cast<std::size_t>(y.num_classes());
  const auto counts = y.class_counts();
  for (std::size_t k = 0; k < c; ++k)
    if (counts[k] == 0) throw ValidationError("fisher_score_column: class " + std::to_string(k) + " has no members");

  std::vector<double> mean(c, 0.0), var(c, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) mean[static_cast<std::size_t>(y[i])] += values[i];
  for (std::size_t k = 0; k < c; ++k) mean[k] /= static_cast<double>(counts[k]);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean[static_cast<std::size_t>(y[i])];
    var[static_cast<std::size_t>(y[i])] += d * d;
  }
  for (std::size_t k = 0; k < c; ++k) var[k] /= static_cast<double>(counts[k]);

  if (c == 2) {
    const double gap = mean[0] - mean[1];
    return gap * gap / (var[0] + var[1] + kFisherEpsilon);
  }
  double overall = 0.0;
  for (double v : values) overall += v;
  overall /= static_cast<double>(values.size());
  double between = 0.0, within = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    const double nk = static_cast<double>(counts[k]);
    between += nk * (mean[k] - overall) * (mean[k] - overall);
    within += nk * var[k];
  }
  return between / (within + kFisherEpsilon);
}

ColumnScores fisher_score(const DenseMatrix& z, const LabelVector& y) {
  check_aligned(z.rows(), y, "fisher_score");
  return per_column(z, [&](const std::vector<double>& col) { return fisher_score_column(col, y); });
}

double discrete_entropy(const LabelVector& y) {
  if (y.size() == 0) throw ValidationError("discrete_entropy: empty label vector");
  const double n = static_cast<double>(y.size());
  double h = 0.0;
  for (auto c : y.class_counts())
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log(p);
    }
  return h;
}

std::vector<int> quantile_bins(std::span<const double> values, int bins) {
  if (bins < 2) throw ValidationError("quantile_bins: bins must be >= 2");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> out(n, 0);
  std::size_t r = 0;
  while (r < n) {
    std::size_t e = r;
    while (e < n && values[order[e]] == values[order[r]]) ++e;
    const auto bin = static_cast<int>((r * static_cast<std::size_t>(bins)) / n);
    for (std::size_t k = r; k < e; ++k) out[order[k]] = bin;
    r = e;
  }
  return out;
}

double mutual_information_column(std::span<const double> values, const LabelVector& y, int bins) {
  check_aligned(values.size(), y, "mutual_information_column");
  if (bins < 2) throw ValidationError("mutual_information_column: bins must be >= 2");
  const std::size_t n = values.size();
  if (n < static_cast<std::size_t>(bins))
    throw ValidationError("mutual_information_column: need at least as many samples as bins");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("mutual_information_column: non-finite value");

  const auto b = quantile_bins(values, bins);
  const auto c = static_cast<std::size_t>(y.num_classes());
  const auto nb = static_cast<std::size_t>(bins);
  std::vector<double> joint(nb * c, 0.0), pb(nb, 0.0), pc(c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    joint[static_cast<std::size_t>(b[i]) * c + static_cast<std::size_t>(y[i])] += 1.0;
    pb[static_cast<std::size_t>(b[i])] += 1.0;
    pc[static_cast<std::size_t>(y[i])] += 1.0;
  }
  const double total = static_cast<double>(n);
  double mi = 0.0;
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t k = 0; k < c; ++k) {
      const double nij = joint[i * c + k];
      if (nij == 0.0) continue;
      mi += (nij / total) * std::log(nij * total / (pb[i] * pc[k]));
    }
  return std::max(0.0, mi);
}

ColumnScores mutual_information(const DenseMatrix& z, const LabelVector& y, int bins) {
  check_aligned(z.rows(), y, "mutual_information");
  return per_column(z, [&](const std::vector<double>& col) { return mutual_information_column(col, y, bins); });
}

DependencyReport dependency_report(const DenseMatrix& z, const LabelVector& y, int bins, std::string transform) {
  DependencyReport r;
  r.transform = std::move(transform);
  r.bins = bins;
  auto f = fisher_score(z, y);
  auto m = mutual_information(z, y, bins);
  r.per_column_fisher = std::move(f.per_column);
  r.fisher_aggregate = f.aggregate;
  r.fisher_mean = f.mean;
  r.per_column_mi = std::move(m.per_column);
  r.mi_aggregate = m.aggregate;
  r.mi_mean = m.mean;
  r.label_entropy = discrete_entropy(y);
  return r;
}

TransformComparison compare_transforms(const Graph& g, const FeatureMatrix& x, const LabelVector& y,
                                       const DenseMatrix& repr, int bins) {
  if (x.rows() != g.num_nodes() || y.size() != g.num_nodes() || repr.rows() != g.num_nodes())
    throw ValidationError("compare_transforms: graph, features, labels and representation must share N rows");
  const auto a = normalized_adjacency(g);
  TransformComparison out;
  out.gconv = dependency_report(gconv(a, x).data, y, bins, "gconv");
  out.gcat = dependency_report(gcat(repr, x).data, y, bins, "gcat");

  out.smoothness.feature_energy = dirichlet_energy_matrix(g, x);
  std::vector<double> indicator(y.size());
  for (int c = 0; c < y.num_classes(); ++c) {
    for (std::size_t i = 0; i < y.size(); ++i) indicator[i] = y[i] == c ? 1.0 : 0.0;
    out.smoothness.label_indicator_energy.push_back(dirichlet_energy(g, indicator));
  }
  out.smoothness.label_entropy = out.gconv.label_entropy;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_report_kv(const DependencyReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "transform = " << r.transform << '\n'
      << "bins = " << r.bins << '\n'
      << "columns = " << r.per_column_fisher.size() << '\n'
      << "label_entropy = " << fmt17(r.label_entropy) << '\n'
      << "fisher_aggregate = " << fmt17(r.fisher_aggregate) << '\n'
      << "fisher_mean = " << fmt17(r.fisher_mean) << '\n'
      << "mi_aggregate = " << fmt17(r.mi_aggregate) << '\n'
      << "mi_mean = " << fmt17(r.mi_mean) << '\n';
  for (std::size_t k = 0; k < r.per_column_fisher.size(); ++k)
    out << "fisher." << k << " = " << fmt17(r.per_column_fisher[k]) << '\n';
  for (std::size_t k = 0; k < r.per_column_mi.size(); ++k)
    out << "mi." << k << " = " << fmt17(r.per_column_mi[k]) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

void write_report_csv(const DependencyReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "column,fisher,mi\n";
  for (std::size_t k = 0; k < r.per_column_fisher.size(); ++k)
    out << k << ',' << fmt17(r.per_column_fisher[k]) << ',' << fmt17(r.per_column_mi[k]) << '\n';
  out << "aggregate," << fmt17(r.fisher_aggregate) << ',' << fmt17(r.mi_aggregate) << '\n';
  out << "mean," << fmt17(r.fisher_mean) << ',' << fmt17(r.mi_mean) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace gcatlab
