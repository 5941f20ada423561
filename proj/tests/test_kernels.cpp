#include <gtest/gtest.h>

#include "gcatlab/error.hpp"
#include "gcatlab/kernels.hpp"
#include "test_util.hpp"

using namespace gcatlab;
using namespace gcatlab::test;

namespace {

// Naive triple loop, the ground truth for both kernel variants.
DenseMatrix naive_product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

class ThreadCount : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = kernels::max_threads();
    kernels::set_threads(GetParam());
  }
  void TearDown() override { kernels::set_threads(saved_); }
  int saved_ = 1;
};

}  // namespace

TEST_P(ThreadCount, SpmmMatchesSerialAndNaive) {
  const Graph g = random_graph(150, 0.05, 1);
  const auto x = random_matrix(150, 7, 2);
  DenseMatrix par, ser;
  kernels::spmm(g.adjacency(), x, par);
  kernels::serial::spmm(g.adjacency(), x, ser);
  EXPECT_EQ(par, ser);
  EXPECT_LT(max_abs_diff(par, naive_product(g.adjacency().to_dense(), x)), 1e-12);
}

TEST_P(ThreadCount, GemmVariantsMatchSerialAndNaive) {
  auto a = random_matrix(64, 33, 3);
  for (std::size_t i = 0; i < a.values().size(); i += 3) a.values()[i] = 0.0;
  const auto b = random_matrix(33, 9, 4);
  const auto ref = naive_product(a, b);
  DenseMatrix par, ser;
  kernels::gemm(a, b, par);
  kernels::serial::gemm(a, b, ser);
  EXPECT_EQ(par, ser);
  EXPECT_LT(max_abs_diff(par, ref), 1e-12);
  kernels::gemm_skip_zeros(a, b, par);
  kernels::serial::gemm_skip_zeros(a, b, ser);
  EXPECT_EQ(par, ser);
  EXPECT_LT(max_abs_diff(par, ref), 1e-12);
}

TEST_P(ThreadCount, TransposedProductsMatchSerialAndNaive) {
  const auto a = random_matrix(40, 12, 5);
  const auto b = random_matrix(40, 6, 6);
  DenseMatrix par, ser;
  kernels::gemm_tn(a, b, par);
  kernels::serial::gemm_tn(a, b, ser);
  EXPECT_LT(max_abs_diff(par, ser), 1e-12);
  EXPECT_LT(max_abs_diff(par, naive_product(a.transposed(), b)), 1e-12);

  const auto c = random_matrix(15, 12, 7);
  kernels::gemm_nt(a, c, par);
  kernels::serial::gemm_nt(a, c, ser);
  EXPECT_EQ(par, ser);
  EXPECT_LT(max_abs_diff(par, naive_product(a, c.transposed())), 1e-12);
}

TEST_P(ThreadCount, HconcatMatchesSerial) {
  const auto a = random_matrix(90, 5, 8), b = random_matrix(90, 2, 9);
  DenseMatrix par, ser;
  kernels::hconcat(a, b, par);
  kernels::serial::hconcat(a, b, ser);
  EXPECT_EQ(par, ser);
  for (std::size_t i = 0; i < 90; ++i) {
    EXPECT_EQ(par(i, 4), a(i, 4));
    EXPECT_EQ(par(i, 6), b(i, 1));
  }
}

TEST_P(ThreadCount, DotMatchesSerial) {
  const auto x = random_matrix(1, 1001, 10), y = random_matrix(1, 1001, 11);
  EXPECT_NEAR(kernels::dot(x.row(0), y.row(0)), kernels::serial::dot(x.row(0), y.row(0)), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Kernels, ThreadCount, ::testing::Values(1, 4));

TEST(Kernels, ShapeMismatchesAreRejected) {
  DenseMatrix out;
  EXPECT_THROW(kernels::gemm(DenseMatrix(2, 3), DenseMatrix(2, 3), out), ValidationError);
  EXPECT_THROW(kernels::hconcat(DenseMatrix(2, 3), DenseMatrix(3, 3), out), ValidationError);
  EXPECT_THROW(kernels::spmm(path_graph(3).adjacency(), DenseMatrix(2, 1), out), ValidationError);
  const std::vector<double> x(3), y(4);
  EXPECT_THROW(kernels::dot(x, y), ValidationError);
}
