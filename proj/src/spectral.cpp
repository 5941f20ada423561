#include "gcatlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "gcatlab/error.hpp"

namespace gcatlab {
namespace {

constexpr int kMaxQlIterations = 64;

// Working storage is column-major: v[j * n + k] holds V(k, j). The inner loops
// of both phases walk a single column, so they stay contiguous.
class ColumnMajor {
 public:
  explicit ColumnMajor(std::size_t n) : n_(n), data_(n * n) {}
  double& operator()(std::size_t row, std::size_t col) noexcept { return data_[col * n_ + row]; }
  double* column(std::size_t col) noexcept { return data_.data() + col * n_; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
// On return d holds the diagonal, e the subdiagonal in e[1..n-1], and v the
// accumulated orthogonal transform.
void tridiagonalize(ColumnMajor& v, std::vector<double>& d, std::vector<double>& e, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        double* vj = v.column(j);
        g = e[j] + vj[j] * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += vj[k] * d[k];
          e[k] += vj[k] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        double* vj = v.column(j);
        for (std::size_t k = j; k < i; ++k) vj[k] -= (f * e[k] + g * d[k]);
        d[j] = vj[i - 1];
        vj[i] = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    double* vi1 = v.column(i + 1);
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = vi1[k] / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double* vj = v.column(j);
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += vi1[k] * vj[k];
        for (std::size_t k = 0; k <= i; ++k) vj[k] -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) vi1[k] = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal matrix (EISPACK tql2 ordering).
void ql_implicit(ColumnMajor& v, std::vector<double>& d, std::vector<double>& e, std::size_t n) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations)
          throw NumericError("eigendecompose: QL iteration did not converge for eigenvalue " + std::to_string(l));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);

          double* a = v.column(ii);
          double* b = v.column(ii + 1);
          for (std::size_t k = 0; k < n; ++k) {
            const double t = b[k];
            b[k] = s * a[k] + c * t;
            a[k] = c * a[k] - s * t;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

SpectralBasis eigendecompose(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw ValidationError("eigendecompose: matrix must be square and non-empty");
  double scale = 0.0;
  for (double x : m.values()) {
    if (!std::isfinite(x)) throw ValidationError("eigendecompose: non-finite entry");
    scale = std::max(scale, std::abs(x));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-9 * std::max(1.0, scale))
        throw ValidationError("eigendecompose: matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");

  ColumnMajor v(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = m(i, j);
  std::vector<double> d(n), e(n);
  if (n == 1) {
    d[0] = m(0, 0);
    v(0, 0) = 1.0;
  } else {
    tridiagonalize(v, d, e, n);
    ql_implicit(v, d, e, n);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  SpectralBasis out;
  out.eigenvalues.resize(n);
  out.eigenvectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double* col = v.column(order[k]);
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(col[i]) > 1e-12) {
        sign = col[i] > 0 ? 1.0 : -1.0;
        break;
      }
    out.eigenvalues[k] = d[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = sign * col[i];
  }
  return out;
}

std::vector<double> select_eigenvector(const SpectralBasis& b, long idx) {
  const long n = static_cast<long>(b.size());
  if (idx < -n || idx >= n)
    throw ValidationError("select_eigenvector: index " + std::to_string(idx) + " outside [" + std::to_string(-n) +
                          ", " + std::to_string(n) + ")");
  const auto col = static_cast<std::size_t>(idx >= 0 ? idx : n + idx);
  return b.eigenvectors.col(col);
}

// ---------------------------------------------------------------------------
// Cache

namespace {

constexpr char kMagic[4] = {'G', 'C', 'S', 'B'};
constexpr std::uint32_t kCacheVersion = 1;

template <class T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool read_pod(std::ifstream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

std::uint64_t content_hash(const DenseMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const unsigned char* p, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t shape[2] = {m.rows(), m.cols()};
  mix(reinterpret_cast<const unsigned char*>(shape), sizeof(shape));
  mix(reinterpret_cast<const unsigned char*>(m.values().data()), m.values().size() * sizeof(double));
  return h;
}

void save_basis(const SpectralBasis& b, std::uint64_t hash, const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write basis cache " + tmp.string());
    out.write(kMagic, 4);
    write_pod(out, kCacheVersion);
    write_pod(out, hash);
    const std::uint64_t n = b.size();
    write_pod(out, n);
    out.write(reinterpret_cast<const char*>(b.eigenvalues.data()), static_cast<std::streamsize>(n * sizeof(double)));
    for (std::size_t k = 0; k < n; ++k) {
      const auto col = b.eigenvectors.col(k);
      out.write(reinterpret_cast<const char*>(col.data()), static_cast<std::streamsize>(n * sizeof(double)));
    }
    if (!out) throw IoError("short write to basis cache " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::optional<SpectralBasis> load_basis(std::uint64_t hash, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t stored_hash = 0, n = 0;
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) return std::nullopt;
  if (!read_pod(in, version) || version != kCacheVersion) return std::nullopt;
  if (!read_pod(in, stored_hash) || stored_hash != hash) return std::nullopt;
  if (!read_pod(in, n) || n == 0 || n > (1u << 20)) return std::nullopt;
  SpectralBasis b;
  b.eigenvalues.resize(n);
  b.eigenvectors = DenseMatrix(n, n);
  if (!in.read(reinterpret_cast<char*>(b.eigenvalues.data()), static_cast<std::streamsize>(n * sizeof(double))))
    return std::nullopt;
  std::vector<double> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!in.read(reinterpret_cast<char*>(col.data()), static_cast<std::streamsize>(n * sizeof(double))))
      return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) b.eigenvectors(i, k) = col[i];
  }
  return b;
}

SpectralBasis eigendecompose_cached(const DenseMatrix& m, const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return eigendecompose(m);
  const std::uint64_t h = content_hash(m);
  char name[32];
  std::snprintf(name, sizeof(name), "basis-%016llx.bin", static_cast<unsigned long long>(h));
  const auto file = cache_dir / name;
  if (auto hit = load_basis(h, file)) return std::move(*hit);
  auto b = eigendecompose(m);
  save_basis(b, h, file);
  return b;
}

}  // namespace gcatlab
