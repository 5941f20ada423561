#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gcatlab/dense.hpp"

namespace gcatlab {

/// Compressed sparse row matrix; column indices are sorted within each row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;  // size rows + 1
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return values.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t i) const noexcept {
    return {col_idx.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }
  std::span<const double> row_values(std::size_t i) const noexcept {
    return {values.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }

  /// Entry lookup by binary search; zero when absent.
  double at(std::size_t i, std::size_t j) const noexcept;

  DenseMatrix to_dense() const;
};

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

/// Assembles a CSR matrix; duplicate (row, col) entries are summed.
CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

}  // namespace gcatlab
