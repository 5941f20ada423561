#include "gcatlab/sparse.hpp"

#include <algorithm>

namespace gcatlab {

double CsrMatrix::at(std::size_t i, std::size_t j) const noexcept {
  auto cols_i = row_cols(i);
  auto it = std::lower_bound(cols_i.begin(), cols_i.end(), static_cast<std::uint32_t>(j));
  if (it == cols_i.end() || *it != j) return 0.0;
  return values[row_ptr[i] + static_cast<std::size_t>(it - cols_i.begin())];
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) out(i, col_idx[p]) = values[p];
  return out;
}

CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  m.col_idx.reserve(triplets.size());
  m.values.reserve(triplets.size());
  for (std::size_t t = 0; t < triplets.size(); ++t) {
    const auto& tr = triplets[t];
    if (!m.col_idx.empty() && t > 0 && triplets[t - 1].row == tr.row && triplets[t - 1].col == tr.col) {
      m.values.back() += tr.value;
      continue;
    }
    m.col_idx.push_back(tr.col);
    m.values.push_back(tr.value);
    ++m.row_ptr[tr.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

}  // namespace gcatlab
