#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "gcatlab/dense.hpp"
#include "gcatlab/graph.hpp"
#include "gcatlab/rng.hpp"

namespace gcatlab::test {

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
  return Graph::from_edges(n, e);
}

/// Erdos-Renyi style graph with random weights; may be disconnected.
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (uniform01(rng) < p) e.push_back({i, j, uniform_real(rng, 0.5, 2.0)});
  return Graph::from_edges(n, e);
}

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Rng rng = make_rng(seed);
  DenseMatrix m(r, c);
  for (auto& v : m.values()) v = uniform_real(rng, lo, hi);
  return m;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("gcatlab_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace gcatlab::test
