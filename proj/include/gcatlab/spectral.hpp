#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "gcatlab/dense.hpp"

namespace gcatlab {

/// Ascending eigenvalues with unit-norm eigenvectors stored as matrix columns.
struct SpectralBasis {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;  // column k pairs with eigenvalues[k]

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Full eigendecomposition of a dense symmetric matrix by Householder
/// tridiagonalization followed by implicit-shift QL. Each eigenvector is
/// sign-normalized so its first component with |v| > 1e-12 is positive.
SpectralBasis eigendecompose(const DenseMatrix& m);

/// idx >= 0 picks column idx of the ascending order; idx < 0 picks N + idx,
/// so -1 is the highest-frequency eigenvector.
std::vector<double> select_eigenvector(const SpectralBasis& b, long idx);

/// FNV-1a over the shape and raw bytes of the matrix.
std::uint64_t content_hash(const DenseMatrix& m);

/// Binary basis cache: "GCSB" magic, version, hash, N, eigenvalues, column-major vectors.
void save_basis(const SpectralBasis& b, std::uint64_t hash, const std::filesystem::path& file);
std::optional<SpectralBasis> load_basis(std::uint64_t hash, const std::filesystem::path& file);

/// eigendecompose with a lookup in cache_dir (file named by hash); on a miss
/// the result is computed and stored. An empty cache_dir disables caching.
SpectralBasis eigendecompose_cached(const DenseMatrix& m, const std::filesystem::path& cache_dir);

}  // namespace gcatlab
