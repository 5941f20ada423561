#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcatlab/dense.hpp"
#include "gcatlab/graph.hpp"

namespace gcatlab {

/// Denominator floor for the Fisher score.
inline constexpr double kFisherEpsilon = 1e-12;
inline constexpr int kDefaultBins = 16;

/// Fisher score of one column against the labels. Two classes use
/// (μ₀ − μ₁)² / (σ₀² + σ₁² + ε) with population variances; more classes use
/// Σ n_c (μ_c − μ)² / (Σ n_c σ_c² + ε).
double fisher_score_column(std::span<const double> values, const LabelVector& y);

struct ColumnScores {
  std::vector<double> per_column;
  double aggregate = 0.0;  // max over columns
  double mean = 0.0;
};

ColumnScores fisher_score(const DenseMatrix& z, const LabelVector& y);

/// Plug-in entropy of the label distribution, in nats.
double discrete_entropy(const LabelVector& y);

/// Quantile bin of every value: a run of equal values starting at sorted rank
/// r lands in bin floor(r * bins / N). Ties always share a bin.
std::vector<int> quantile_bins(std::span<const double> values, int bins);

/// Plug-in mutual information (nats, clamped at 0) between the quantile-binned
/// column and the labels.
double mutual_information_column(std::span<const double> values, const LabelVector& y, int bins = kDefaultBins);

ColumnScores mutual_information(const DenseMatrix& z, const LabelVector& y, int bins = kDefaultBins);

struct DependencyReport {
  std::string transform;
  std::vector<double> per_column_fisher;
  double fisher_aggregate = 0.0;
  double fisher_mean = 0.0;
  std::vector<double> per_column_mi;
  double mi_aggregate = 0.0;
  double mi_mean = 0.0;
  double label_entropy = 0.0;
  int bins = kDefaultBins;
};

DependencyReport dependency_report(const DenseMatrix& z, const LabelVector& y, int bins, std::string transform);

/// Smoothness diagnostics that place a scenario on the homophily/heterophily map.
struct SmoothnessSummary {
  double feature_energy = 0.0;                // S2(X)
  std::vector<double> label_indicator_energy; // S2(1[y == c]) per class
  double label_entropy = 0.0;
};

struct TransformComparison {
  DependencyReport gconv;
  DependencyReport gcat;
  SmoothnessSummary smoothness;
};

/// Reports for Z = ÂX and Z = [repr | X] against the same labels.
TransformComparison compare_transforms(const Graph& g, const FeatureMatrix& x, const LabelVector& y,
                                       const DenseMatrix& repr, int bins = kDefaultBins);

/// Flat "key = value" text with aggregate keys first, then per-column entries.
void write_report_kv(const DependencyReport& r, const std::filesystem::path& path);
/// CSV "column,fisher,mi" rows followed by an "aggregate" row (max) and a "mean" row.
void write_report_csv(const DependencyReport& r, const std::filesystem::path& path);

}  // namespace gcatlab
