#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "gcatlab/error.hpp"
#include "gcatlab/graph.hpp"
#include "gcatlab/spectral.hpp"
#include "test_util.hpp"

using namespace gcatlab;
using namespace gcatlab::test;

namespace {

// Cyclic Jacobi rotations; eigenvalues only, ascending.
std::vector<double> jacobi_eigenvalues(DenseMatrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double reconstruction_error(const SpectralBasis& b, const DenseMatrix& m) {
  const std::size_t n = m.rows();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double r = 0.0;
      for (std::size_t k = 0; k < n; ++k) r += b.eigenvectors(i, k) * b.eigenvalues[k] * b.eigenvectors(j, k);
      num += (r - m(i, j)) * (r - m(i, j));
      den += m(i, j) * m(i, j);
    }
  return std::sqrt(num / den);
}

}  // namespace

TEST(Eigendecompose, SingleEdgeLaplacian) {
  const auto b = eigendecompose(laplacian(path_graph(2)));
  EXPECT_NEAR(b.eigenvalues[0], 0.0, 1e-14);
  EXPECT_NEAR(b.eigenvalues[1], 2.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(b.eigenvectors(0, 0), r, 1e-14);
  EXPECT_NEAR(b.eigenvectors(1, 0), r, 1e-14);
  EXPECT_NEAR(b.eigenvectors(0, 1), r, 1e-14);
  EXPECT_NEAR(b.eigenvectors(1, 1), -r, 1e-14);
}

TEST(Eigendecompose, DiagonalGivesStandardBasis) {
  const auto b = eigendecompose(DenseMatrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
  EXPECT_EQ(b.eigenvalues, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(b.eigenvectors(1, 0), 1.0);
  EXPECT_EQ(b.eigenvectors(2, 1), 1.0);
  EXPECT_EQ(b.eigenvectors(0, 2), 1.0);
}

TEST(Eigendecompose, PathOfThreeLaplacian) {
  const auto b = eigendecompose(laplacian(path_graph(3)));
  EXPECT_NEAR(b.eigenvalues[0], 0.0, 1e-14);
  EXPECT_NEAR(b.eigenvalues[1], 1.0, 1e-14);
  EXPECT_NEAR(b.eigenvalues[2], 3.0, 1e-14);
}

TEST(Eigendecompose, AgreesWithJacobiOnRandomSymmetric) {
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    auto m = random_matrix(25, 25, seed);
    for (std::size_t i = 0; i < 25; ++i)
      for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
    const auto b = eigendecompose(m);
    const auto ref = jacobi_eigenvalues(m);
    for (std::size_t k = 0; k < 25; ++k) EXPECT_NEAR(b.eigenvalues[k], ref[k], 1e-10);
  }
}

TEST(Eigendecompose, BasisInvariantsOnRandomGraphs) {
  for (std::uint64_t seed : {10, 11}) {
    const Graph g = random_graph(120, 0.05, seed);
    const DenseMatrix l = laplacian(g);
    const auto b = eigendecompose(l);
    EXPECT_GE(b.eigenvalues.front(), -1e-9);
    EXPECT_TRUE(std::is_sorted(b.eigenvalues.begin(), b.eigenvalues.end()));
    EXPECT_LT(reconstruction_error(b, l), 1e-10);
    const std::size_t n = l.rows();
    for (std::size_t p = 0; p < n; p += 7)
      for (std::size_t q = 0; q < n; ++q) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += b.eigenvectors(i, p) * b.eigenvectors(i, q);
        EXPECT_NEAR(d, p == q ? 1.0 : 0.0, 1e-8);
      }
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = select_eigenvector(b, static_cast<long>(k));
      // Residual of L v = λ v and the sign convention.
      double res = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double lv = 0.0;
        for (std::size_t j = 0; j < n; ++j) lv += l(i, j) * v[j];
        res = std::max(res, std::abs(lv - b.eigenvalues[k] * v[i]));
        scale = std::max(scale, std::abs(lv));
      }
      EXPECT_LT(res, 1e-7 * std::max(1.0, scale));
      const auto first = std::find_if(v.begin(), v.end(), [](double x) { return std::abs(x) > 1e-12; });
      ASSERT_NE(first, v.end());
      EXPECT_GT(*first, 0.0);
    }
  }
}

TEST(Eigendecompose, EnergyOfEigenvectorEqualsEigenvalue) {
  const Graph g = grid_graph(10, 12);
  const auto b = eigendecompose(laplacian(g));
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double e = dirichlet_energy(g, select_eigenvector(b, static_cast<long>(k)));
    EXPECT_NEAR(e, b.eigenvalues[k], 1e-7 * std::max(1.0, b.eigenvalues[k]));
  }
}

TEST(Eigendecompose, IsDeterministic) {
  const DenseMatrix l = laplacian(random_graph(80, 0.1, 5));
  const auto a = eigendecompose(l), b = eigendecompose(l);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(Eigendecompose, RejectsAsymmetricAndNonSquare) {
  EXPECT_THROW(eigendecompose(DenseMatrix::from_rows({{1, 2}, {0, 1}})), ValidationError);
  EXPECT_THROW(eigendecompose(DenseMatrix(2, 3)), ValidationError);
}

TEST(SelectEigenvector, SignedIndexing) {
  const auto b = eigendecompose(laplacian(path_graph(2)));
  const auto top = select_eigenvector(b, -1);
  EXPECT_NEAR(top[0], 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(top[1], -1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_THROW(select_eigenvector(b, 2), ValidationError);
  EXPECT_THROW(select_eigenvector(b, -3), ValidationError);
  EXPECT_NO_THROW(select_eigenvector(b, -2));
}

TEST(SelectEigenvector, ConstantSignAtZeroAndEnergyOrdering) {
  const Graph g = random_graph(50, 0.3, 8);
  const auto b = eigendecompose(laplacian(g));
  const auto v0 = select_eigenvector(b, 0);
  for (double x : v0) EXPECT_GT(x, 0.0);
  EXPECT_GE(dirichlet_energy(g, select_eigenvector(b, -1)), dirichlet_energy(g, select_eigenvector(b, 1)));
}

TEST(BasisCache, RoundTripAndHashMismatch) {
  const auto dir = scratch_dir("cache");
  const DenseMatrix l = laplacian(grid_graph(4, 5));
  const auto computed = eigendecompose_cached(l, dir);
  const auto reloaded = eigendecompose_cached(l, dir);
  EXPECT_EQ(computed.eigenvalues, reloaded.eigenvalues);
  EXPECT_EQ(computed.eigenvectors, reloaded.eigenvectors);
  const std::uint64_t h = content_hash(l);
  const auto file = dir / "basis.bin";
  save_basis(computed, h, file);
  EXPECT_TRUE(load_basis(h, file).has_value());
  EXPECT_FALSE(load_basis(h + 1, file).has_value());
  std::ofstream(file, std::ios::binary) << "junk";
  EXPECT_FALSE(load_basis(h, file).has_value());
}

TEST(BasisCache, HashDependsOnContent) {
  DenseMatrix a = laplacian(path_graph(3));
  const auto h = content_hash(a);
  a(0, 0) += 1e-15;
  EXPECT_NE(h, content_hash(a));
}
