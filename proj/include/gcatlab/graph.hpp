#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "gcatlab/dense.hpp"
#include "gcatlab/sparse.hpp"

namespace gcatlab {

using FeatureMatrix = DenseMatrix;

struct Edge {
  std::uint32_t u;
  std::uint32_t v;
  double w = 1.0;
};

enum class DuplicateEdges {
  reject,      // any repeated undirected pair is an error
  merge_equal  // repeats are dropped if the weight agrees, error otherwise
};

/// Undirected weighted graph. Immutable once built; adjacency holds both
/// directions, no self-loops, strictly positive finite weights.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges,
                          DuplicateEdges policy = DuplicateEdges::reject);

  std::size_t num_nodes() const noexcept { return adjacency_.rows; }
  /// Number of undirected edges.
  std::size_t num_edges() const noexcept { return adjacency_.nnz() / 2; }
  const CsrMatrix& adjacency() const noexcept { return adjacency_; }

  std::span<const std::uint32_t> neighbors(std::size_t u) const noexcept { return adjacency_.row_cols(u); }
  std::span<const double> neighbor_weights(std::size_t u) const noexcept {
    return adjacency_.row_values(u);
  }
  double weight(std::size_t u, std::size_t v) const noexcept { return adjacency_.at(u, v); }
  /// Weighted degree of u in W (no self-loop).
  double degree(std::size_t u) const noexcept;

  /// Each undirected edge once, with u < v, in CSR order.
  std::vector<Edge> edges() const;

 private:
  CsrMatrix adjacency_;
};

/// Four-neighbour lattice, node id = r * cols + c.
Graph grid_graph(std::size_t rows, std::size_t cols);

/// Reads "u v [w]" lines; '#' comments; optional leading "N <count>" header.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(std::string_view text, std::string_view source = "<memory>");

/// Integer labels in [0, num_classes).
class LabelVector {
 public:
  LabelVector() = default;
  /// num_classes = 0 infers max + 1 (at least 2).
  explicit LabelVector(std::vector<int> labels, int num_classes = 0);

  std::size_t size() const noexcept { return labels_.size(); }
  int num_classes() const noexcept { return num_classes_; }
  int operator[](std::size_t i) const noexcept { return labels_[i]; }
  std::span<const int> values() const noexcept { return labels_; }
  std::vector<std::size_t> class_counts() const;

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<int> labels_;
  int num_classes_ = 0;
};

/// Â = D^{-1/2}(I+W)D^{-1/2} with D the degree matrix of I+W.
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(CsrMatrix m) : matrix_(std::move(m)) {}
  const CsrMatrix& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return matrix_.rows; }
  DenseMatrix to_dense() const { return matrix_.to_dense(); }

 private:
  CsrMatrix matrix_;
};

enum class Provenance { raw, gconv, gcat, sgc };
std::string_view to_string(Provenance p) noexcept;

struct TransformedFeatures {
  DenseMatrix data;
  Provenance tag = Provenance::raw;

  std::size_t rows() const noexcept { return data.rows(); }
  std::size_t cols() const noexcept { return data.cols(); }
};

NormalizedAdjacency normalized_adjacency(const Graph& g);

/// Combinatorial Laplacian L = D_W - W, dense.
DenseMatrix laplacian(const Graph& g);
CsrMatrix laplacian_sparse(const Graph& g);

/// ½ Σ_{ordered pairs} w_ij (x_j - x_i)², i.e. xᵀLx.
double dirichlet_energy(const Graph& g, std::span<const double> x);
/// Sum of dirichlet_energy over the columns of x.
double dirichlet_energy_matrix(const Graph& g, const FeatureMatrix& x);

/// Z = ÂX, computed as a sparse product.
TransformedFeatures gconv(const NormalizedAdjacency& a, const FeatureMatrix& x);

/// Z = [repr | X]; entries are copied, never combined.
TransformedFeatures gcat(const DenseMatrix& repr, const FeatureMatrix& x);

}  // namespace gcatlab
