#include "gcatlab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "gcatlab/error.hpp"

namespace gcatlab::kernels {
namespace {

void check_spmm(const CsrMatrix& a, const DenseMatrix& x) {
  if (a.cols != x.rows())
    throw ValidationError("spmm: A is " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                          ", X has " + std::to_string(x.rows()) + " rows");
}

void check_gemm(std::size_t inner_a, std::size_t inner_b, const char* op) {
  if (inner_a != inner_b)
    throw ValidationError(std::string(op) + ": inner dimensions " + std::to_string(inner_a) +
                          " and " + std::to_string(inner_b) + " differ");
}

void reshape(DenseMatrix& out, std::size_t rows, std::size_t cols) {
  if (out.rows() != rows || out.cols() != cols) out = DenseMatrix(rows, cols);
}

inline void spmm_row(const CsrMatrix& a, const DenseMatrix& x, std::size_t i, std::span<double> dst) {
  std::fill(dst.begin(), dst.end(), 0.0);
  const std::size_t f = x.cols();
  for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
    const double w = a.values[p];
    const double* src = x.row(a.col_idx[p]).data();
    for (std::size_t k = 0; k < f; ++k) dst[k] += w * src[k];
  }
}

template <bool SkipZeros>
inline void gemm_row(const DenseMatrix& a, const DenseMatrix& b, std::size_t i, std::span<double> dst) {
  std::fill(dst.begin(), dst.end(), 0.0);
  const std::size_t n = b.cols();
  auto ai = a.row(i);
  for (std::size_t k = 0; k < ai.size(); ++k) {
    const double aik = ai[k];
    if constexpr (SkipZeros) {
      if (aik == 0.0) continue;
    }
    const double* bk = b.row(k).data();
    for (std::size_t j = 0; j < n; ++j) dst[j] += aik * bk[j];
  }
}

// Row i of Aᵀ·B = Σ_k A(k, i) · B(k, :)
inline void gemm_tn_row(const DenseMatrix& a, const DenseMatrix& b, std::size_t i, std::span<double> dst) {
  std::fill(dst.begin(), dst.end(), 0.0);
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double aki = a(k, i);
    if (aki == 0.0) continue;
    const double* bk = b.row(k).data();
    for (std::size_t j = 0; j < n; ++j) dst[j] += aki * bk[j];
  }
}

inline double dot_impl(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

inline void gemm_nt_row(const DenseMatrix& a, const DenseMatrix& b, std::size_t i, std::span<double> dst) {
  auto ai = a.row(i);
  for (std::size_t j = 0; j < b.rows(); ++j) dst[j] = dot_impl(ai.data(), b.row(j).data(), ai.size());
}

inline void concat_row(const DenseMatrix& a, const DenseMatrix& b, std::size_t i, std::span<double> dst) {
  auto ai = a.row(i);
  auto bi = b.row(i);
  std::copy(ai.begin(), ai.end(), dst.begin());
  std::copy(bi.begin(), bi.end(), dst.begin() + static_cast<std::ptrdiff_t>(ai.size()));
}

}  // namespace

// ---------------------------------------------------------------------------
// OpenMP

void spmm(const CsrMatrix& a, const DenseMatrix& x, DenseMatrix& out) {
  check_spmm(a, x);
  reshape(out, a.rows, x.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) spmm_row(a, x, static_cast<std::size_t>(i), out.row(i));
}

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.cols(), b.rows(), "gemm");
  reshape(out, a.rows(), b.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) gemm_row<false>(a, b, static_cast<std::size_t>(i), out.row(i));
}

void gemm_skip_zeros(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.cols(), b.rows(), "gemm_skip_zeros");
  reshape(out, a.rows(), b.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) gemm_row<true>(a, b, static_cast<std::size_t>(i), out.row(i));
}

void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.rows(), b.rows(), "gemm_tn");
  reshape(out, a.cols(), b.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) gemm_tn_row(a, b, static_cast<std::size_t>(i), out.row(i));
}

void gemm_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.cols(), b.cols(), "gemm_nt");
  reshape(out, a.rows(), b.rows());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) gemm_nt_row(a, b, static_cast<std::size_t>(i), out.row(i));
}

void hconcat(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  if (a.rows() != b.rows())
    throw ValidationError("hconcat: row counts " + std::to_string(a.rows()) + " and " +
                          std::to_string(b.rows()) + " differ");
  reshape(out, a.rows(), a.cols() + b.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) concat_row(a, b, static_cast<std::size_t>(i), out.row(i));
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("dot: length mismatch");
  return dot_impl(x.data(), y.data(), x.size());
}

// ---------------------------------------------------------------------------
// Serial reference

namespace serial {

void spmm(const CsrMatrix& a, const DenseMatrix& x, DenseMatrix& out) {
  check_spmm(a, x);
  reshape(out, a.rows, x.cols());
  for (std::size_t i = 0; i < a.rows; ++i) spmm_row(a, x, i, out.row(i));
}

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.cols(), b.rows(), "gemm");
  reshape(out, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) gemm_row<false>(a, b, i, out.row(i));
}

void gemm_skip_zeros(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.cols(), b.rows(), "gemm_skip_zeros");
  reshape(out, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) gemm_row<true>(a, b, i, out.row(i));
}

void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.rows(), b.rows(), "gemm_tn");
  reshape(out, a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) gemm_tn_row(a, b, i, out.row(i));
}

void gemm_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  check_gemm(a.cols(), b.cols(), "gemm_nt");
  reshape(out, a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) gemm_nt_row(a, b, i, out.row(i));
}

void hconcat(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  if (a.rows() != b.rows()) throw ValidationError("hconcat: row counts differ");
  reshape(out, a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) concat_row(a, b, i, out.row(i));
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace serial

// ---------------------------------------------------------------------------

int max_threads() {
  if (const char* env = std::getenv("GCATLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, omp_get_max_threads());
  }
  return omp_get_max_threads();
}

void configure_threads_from_env() {
  if (const char* env = std::getenv("GCATLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) omp_set_num_threads(n);
  }
}

void set_threads(int n) { omp_set_num_threads(std::max(1, n)); }

}  // namespace gcatlab::kernels
