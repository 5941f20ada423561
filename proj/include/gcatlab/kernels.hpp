#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version and a plain
// serial version under kernels::serial. The serial versions are the reference
// the tests compare against and the baseline in bench/.
//
// Outputs are resized as needed. Each output element is produced by exactly one
// thread with the same accumulation order as the serial reference.

#include <span>

#include "gcatlab/dense.hpp"
#include "gcatlab/sparse.hpp"

namespace gcatlab::kernels {

/// out = A · X   (CSR × dense)
void spmm(const CsrMatrix& a, const DenseMatrix& x, DenseMatrix& out);
/// out = A · B   (dense × dense, every product evaluated)
void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
/// out = A · B, skipping zero entries of A (for mostly-zero left operands).
void gemm_skip_zeros(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
/// out = Aᵀ · B
void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
/// out = A · Bᵀ
void gemm_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
/// out = [A | B]
void hconcat(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
/// Σ_i x_i y_i
double dot(std::span<const double> x, std::span<const double> y);

namespace serial {
void spmm(const CsrMatrix& a, const DenseMatrix& x, DenseMatrix& out);
void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
void gemm_skip_zeros(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
void gemm_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
void hconcat(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace serial

/// Worker count: GCATLAB_THREADS if set, else the OpenMP default.
int max_threads();
/// Applies GCATLAB_THREADS to the OpenMP runtime; call once at startup.
void configure_threads_from_env();
void set_threads(int n);

}  // namespace gcatlab::kernels
