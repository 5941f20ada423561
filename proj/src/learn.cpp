#include "gcatlab/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>

#include "gcatlab/error.hpp"
#include "gcatlab/kernels.hpp"
#include "gcatlab/rng.hpp"

namespace gcatlab {
namespace {

void check_training_rows(const DenseMatrix& z, const LabelVector& y, std::span<const std::size_t> train_idx,
                         const char* who) {
  if (z.rows() != y.size())
    throw ValidationError(std::string(who) + ": " + std::to_string(z.rows()) + " feature rows but " +
                          std::to_string(y.size()) + " labels");
  if (train_idx.empty()) throw ValidationError(std::string(who) + ": empty training set");
  std::vector<bool> present(static_cast<std::size_t>(y.num_classes()), false);
  for (auto i : train_idx) {
    if (i >= z.rows()) throw ValidationError(std::string(who) + ": training index out of range");
    present[static_cast<std::size_t>(y[i])] = true;
  }
  for (std::size_t c = 0; c < present.size(); ++c)
    if (!present[c]) throw ValidationError(std::string(who) + ": class " + std::to_string(c) + " missing from training rows");
}

std::vector<int> gather_labels(const LabelVector& y, std::span<const std::size_t> idx) {
  std::vector<int> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = y[idx[k]];
  return out;
}

// In-place row softmax.
void softmax_rows(DenseMatrix& s) {
  for (std::size_t i = 0; i < s.rows(); ++i) {
    auto r = s.row(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (auto& v : r) sum += (v = std::exp(v - mx));
    for (auto& v : r) v /= sum;
  }
}

std::size_t argmax_lowest(std::span<const double> r) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < r.size(); ++c)
    if (r[c] > r[best]) best = c;
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Standardization

Standardizer Standardizer::fit(const DenseMatrix& z, std::span<const std::size_t> rows) {
  if (rows.empty()) throw ValidationError("Standardizer::fit: no rows");
  const std::size_t k = z.cols();
  Standardizer s;
  s.mean.assign(k, 0.0);
  s.stddev.assign(k, 0.0);
  for (auto i : rows) {
    auto r = z.row(i);
    for (std::size_t j = 0; j < k; ++j) s.mean[j] += r[j];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : s.mean) m /= n;
  for (auto i : rows) {
    auto r = z.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      const double d = r[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (auto& v : s.stddev) {
    v = std::sqrt(v / n);
    if (v < 1e-12) v = 0.0;
  }
  return s;
}

DenseMatrix Standardizer::apply(const DenseMatrix& z, std::span<const std::size_t> rows) const {
  if (z.cols() != width())
    throw ValidationError("Standardizer::apply: expected " + std::to_string(width()) + " columns, got " +
                          std::to_string(z.cols()));
  const std::size_t n = rows.empty() ? z.rows() : rows.size();
  DenseMatrix out(n, width());
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t src = rows.empty() ? r : rows[r];
    auto in = z.row(src);
    auto dst = out.row(r);
    for (std::size_t j = 0; j < width(); ++j) dst[j] = stddev[j] > 0.0 ? (in[j] - mean[j]) / stddev[j] : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Logistic regression

double logreg_objective(const DenseMatrix& zs, std::span<const int> labels, const DenseMatrix& w,
                        std::span<const double> bias, double l2, DenseMatrix* grad_w, std::vector<double>* grad_b) {
  const std::size_t n = zs.rows();
  const std::size_t c = w.rows();
  DenseMatrix p;
  kernels::gemm_nt(zs, w, p);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = p.row(i);
    for (std::size_t k = 0; k < c; ++k) r[k] += bias[k];
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = p.row(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (double v : r) sum += std::exp(v - mx);
    loss -= r[static_cast<std::size_t>(labels[i])] - mx - std::log(sum);
    for (auto& v : r) v = std::exp(v - mx) / sum;
  }
  loss /= static_cast<double>(n);
  double reg = 0.0;
  for (double v : w.values()) reg += v * v;
  loss += 0.5 * l2 * reg;

  if (grad_w != nullptr || grad_b != nullptr) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto r = p.row(i);
      r[static_cast<std::size_t>(labels[i])] -= 1.0;
      for (auto& v : r) v *= inv_n;
    }
    if (grad_w != nullptr) {
      kernels::gemm_tn(p, zs, *grad_w);
      auto g = grad_w->values();
      auto wv = w.values();
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += l2 * wv[k];
    }
    if (grad_b != nullptr) {
      grad_b->assign(c, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        auto r = p.row(i);
        for (std::size_t k = 0; k < c; ++k) (*grad_b)[k] += r[k];
      }
    }
  }
  return loss;
}

LinearModel train_logreg(const DenseMatrix& z, const LabelVector& y, std::span<const std::size_t> train_idx,
                         const LogregConfig& cfg) {
  check_training_rows(z, y, train_idx, "train_logreg");
  LinearModel m;
  m.kind = LinearKind::logreg;
  m.standardizer = Standardizer::fit(z, train_idx);
  const DenseMatrix zs = m.standardizer.apply(z, train_idx);
  const auto labels = gather_labels(y, train_idx);
  const auto c = static_cast<std::size_t>(y.num_classes());
  const std::size_t k = z.cols();
  const double l2 = cfg.l2 < 0.0 ? 1.0 / static_cast<double>(train_idx.size()) : cfg.l2;

  DenseMatrix w(c, k), gw, w_new(c, k), gw_new;
  std::vector<double> b(c, 0.0), gb, b_new(c), gb_new;
  double f = logreg_objective(zs, labels, w, b, l2, &gw, &gb);
  m.loss_history.push_back(f);
  double step = 1.0;

  for (int it = 0; it < cfg.max_iter; ++it) {
    double gmax = 0.0, gg = 0.0;
    for (double v : gw.values()) {
      gmax = std::max(gmax, std::abs(v));
      gg += v * v;
    }
    for (double v : gb) {
      gmax = std::max(gmax, std::abs(v));
      gg += v * v;
    }
    if (gmax < cfg.tol) {
      m.converged = true;
      break;
    }

    double t = step;
    double f_new = 0.0;
    bool accepted = false;
    while (t > 1e-20) {
      auto wv = w.values(), gv = gw.values(), nv = w_new.values();
      for (std::size_t q = 0; q < wv.size(); ++q) nv[q] = wv[q] - t * gv[q];
      for (std::size_t q = 0; q < c; ++q) b_new[q] = b[q] - t * gb[q];
      f_new = logreg_objective(zs, labels, w_new, b_new, l2, &gw_new, &gb_new);
      if (std::isfinite(f_new) && f_new <= f - 1e-4 * t * gg) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no further decrease representable

    double sy = 0.0;
    {
      auto gv = gw.values(), gnv = gw_new.values();
      for (std::size_t q = 0; q < gv.size(); ++q) sy += -t * gv[q] * (gnv[q] - gv[q]);
      for (std::size_t q = 0; q < c; ++q) sy += -t * gb[q] * (gb_new[q] - gb[q]);
    }
    const double ss = t * t * gg;
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-8, 1e8) : std::min(2.0 * t, 1e8);

    std::swap(w, w_new);
    std::swap(gw, gw_new);
    std::swap(b, b_new);
    std::swap(gb, gb_new);
    f = f_new;
    m.loss_history.push_back(f);
    m.iterations = it + 1;
  }
  m.weights = std::move(w);
  m.bias = std::move(b);
  return m;
}

// ---------------------------------------------------------------------------
// Linear SVM

double svm_objective(const DenseMatrix& zs, std::span<const double> targets, std::span<const double> w, double b,
                     double l2, std::vector<double>* grad_w, double* grad_b) {
  const std::size_t n = zs.rows();
  const std::size_t k = zs.cols();
  double obj = 0.5 * l2 * (std::inner_product(w.begin(), w.end(), w.begin(), 0.0) + b * b);
  if (grad_w != nullptr) {
    grad_w->assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) (*grad_w)[j] = l2 * w[j];
  }
  if (grad_b != nullptr) *grad_b = l2 * b;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = zs.row(i);
    const double margin = targets[i] * (kernels::serial::dot(x, w) + b);
    if (margin < 1.0) {
      obj += (1.0 - margin) * inv_n;
      if (grad_w != nullptr)
        for (std::size_t j = 0; j < k; ++j) (*grad_w)[j] -= targets[i] * x[j] * inv_n;
      if (grad_b != nullptr) *grad_b -= targets[i] * inv_n;
    }
  }
  return obj;
}

LinearModel train_linear_svm(const DenseMatrix& z, const LabelVector& y, std::span<const std::size_t> train_idx,
                             const SvmConfig& cfg) {
  check_training_rows(z, y, train_idx, "train_linear_svm");
  if (!(cfg.l2 > 0.0)) throw ValidationError("train_linear_svm: l2 must be positive");
  if (cfg.epochs < 1) throw ValidationError("train_linear_svm: epochs must be >= 1");
  LinearModel m;
  m.kind = LinearKind::svm;
  m.standardizer = Standardizer::fit(z, train_idx);
  const DenseMatrix zs = m.standardizer.apply(z, train_idx);
  const auto labels = gather_labels(y, train_idx);
  const auto c = static_cast<std::size_t>(y.num_classes());
  const std::size_t k = z.cols();
  const std::size_t n = zs.rows();
  m.weights = DenseMatrix(c, k);
  m.bias.assign(c, 0.0);

  const std::uint64_t total = static_cast<std::uint64_t>(cfg.epochs) * n;
  const std::uint64_t average_from = total / 2;
  std::vector<double> w(k), wsum(k);
  std::vector<std::size_t> order(n);
  for (std::size_t cls = 0; cls < c; ++cls) {
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(wsum.begin(), wsum.end(), 0.0);
    double b = 0.0, bsum = 0.0;
    std::uint64_t averaged = 0, t = 0;
    Rng rng = make_rng(derive_seed(cfg.seed, 0x5f3ULL, cls));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      shuffle(std::span<std::size_t>(order), rng);
      for (std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (cfg.l2 * static_cast<double>(t));
        const double target = labels[i] == static_cast<int>(cls) ? 1.0 : -1.0;
        auto x = zs.row(i);
        const double margin = target * (kernels::serial::dot(x, w) + b);
        const double shrink = 1.0 - eta * cfg.l2;
        for (auto& v : w) v *= shrink;
        b *= shrink;
        if (margin < 1.0) {
          for (std::size_t j = 0; j < k; ++j) w[j] += eta * target * x[j];
          b += eta * target;
        }
        if (t > average_from) {
          for (std::size_t j = 0; j < k; ++j) wsum[j] += w[j];
          bsum += b;
          ++averaged;
        }
      }
    }
    const double inv = 1.0 / static_cast<double>(averaged);
    for (std::size_t j = 0; j < k; ++j) m.weights(cls, j) = wsum[j] * inv;
    m.bias[cls] = bsum * inv;
  }
  m.iterations = static_cast<int>(total);
  return m;
}

// ---------------------------------------------------------------------------
// Prediction

DenseMatrix decision_scores(const LinearModel& m, const DenseMatrix& z) {
  if (z.cols() != m.num_features())
    throw ValidationError("predict: model expects " + std::to_string(m.num_features()) + " features, got " +
                          std::to_string(z.cols()));
  const DenseMatrix zs = m.standardizer.apply(z);
  DenseMatrix s;
  kernels::gemm_nt(zs, m.weights, s);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    auto r = s.row(i);
    for (std::size_t c = 0; c < r.size(); ++c) r[c] += m.bias[c];
  }
  return s;
}

LabelVector predict(const LinearModel& m, const DenseMatrix& z) {
  const DenseMatrix s = decision_scores(m, z);
  std::vector<int> out(s.rows());
  for (std::size_t i = 0; i < s.rows(); ++i) out[i] = static_cast<int>(argmax_lowest(s.row(i)));
  return LabelVector(std::move(out), m.num_classes());
}

double evaluate(const LabelVector& predictions, const LabelVector& truth, std::span<const std::size_t> test_idx) {
  if (predictions.size() != truth.size()) throw ValidationError("evaluate: prediction and truth lengths differ");
  if (test_idx.empty()) throw ValidationError("evaluate: empty test set");
  std::size_t hits = 0;
  for (auto i : test_idx) {
    if (i >= truth.size()) throw ValidationError("evaluate: test index out of range");
    hits += predictions[i] == truth[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(test_idx.size());
}

// ---------------------------------------------------------------------------
// GCN

namespace {

struct GcnPass {
  DenseMatrix x_in;     // dropped-out input
  DenseMatrix pre;      // Â (x_in W0)
  DenseMatrix hidden;   // dropped-out relu(pre)
  DenseMatrix prob;     // softmax(Â (hidden W1))
};

void dropout_inplace(DenseMatrix& m, double rate, Rng& rng) {
  if (rate <= 0.0) return;
  const double keep = 1.0 / (1.0 - rate);
  for (auto& v : m.values()) v = uniform01(rng) < rate ? 0.0 : v * keep;
}

GcnPass gcn_forward(const NormalizedAdjacency& a, const FeatureMatrix& x, const DenseMatrix& w0,
                    const DenseMatrix& w1, double dropout, Rng* rng) {
  GcnPass p;
  p.x_in = x;
  if (rng != nullptr) dropout_inplace(p.x_in, dropout, *rng);
  DenseMatrix xw;
  kernels::gemm_skip_zeros(p.x_in, w0, xw);
  kernels::spmm(a.matrix(), xw, p.pre);
  p.hidden = p.pre;
  for (auto& v : p.hidden.values()) v = std::max(v, 0.0);
  if (rng != nullptr) dropout_inplace(p.hidden, dropout, *rng);
  DenseMatrix hw;
  kernels::gemm(p.hidden, w1, hw);
  kernels::spmm(a.matrix(), hw, p.prob);
  softmax_rows(p.prob);
  return p;
}

// Loss and gradients for a completed forward pass; the dropout masks are
// recovered from the zero pattern of the stored activations.
double gcn_backward(const NormalizedAdjacency& a, const GcnPass& p, const LabelVector& y,
                    std::span<const std::size_t> train_idx, const DenseMatrix& w0, const DenseMatrix& w1,
                    double weight_decay, double dropout, bool dropout_active, DenseMatrix* g0, DenseMatrix* g1) {
  const std::size_t n = p.prob.rows();
  const double inv = 1.0 / static_cast<double>(train_idx.size());
  double loss = 0.0;
  DenseMatrix d_out(n, p.prob.cols());
  for (auto i : train_idx) {
    const auto yi = static_cast<std::size_t>(y[i]);
    loss -= std::log(std::max(p.prob(i, yi), 1e-300));
    auto dr = d_out.row(i);
    auto pr = p.prob.row(i);
    for (std::size_t c = 0; c < dr.size(); ++c) dr[c] = pr[c] * inv;
    dr[yi] -= inv;
  }
  loss *= inv;
  double reg = 0.0;
  for (double v : w0.values()) reg += v * v;
  loss += 0.5 * weight_decay * reg;
  if (g0 == nullptr && g1 == nullptr) return loss;

  DenseMatrix d_hw;
  kernels::spmm(a.matrix(), d_out, d_hw);  // Â symmetric
  if (g1 != nullptr) kernels::gemm_tn(p.hidden, d_hw, *g1);
  if (g0 != nullptr) {
    DenseMatrix d_hidden;
    kernels::gemm_nt(d_hw, w1, d_hidden);
    const double keep = dropout_active && dropout > 0.0 ? 1.0 / (1.0 - dropout) : 1.0;
    auto dh = d_hidden.values();
    auto pre = p.pre.values();
    auto hid = p.hidden.values();
    for (std::size_t q = 0; q < dh.size(); ++q) {
      if (pre[q] <= 0.0 || (dropout_active && hid[q] == 0.0)) dh[q] = 0.0;
      else dh[q] *= keep;
    }
    DenseMatrix d_xw;
    kernels::spmm(a.matrix(), d_hidden, d_xw);
    kernels::gemm_tn(p.x_in, d_xw, *g0);
    auto gv = g0->values();
    auto wv = w0.values();
    for (std::size_t q = 0; q < gv.size(); ++q) gv[q] += weight_decay * wv[q];
  }
  return loss;
}

void glorot(DenseMatrix& w, Rng& rng) {
  const double r = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (auto& v : w.values()) v = uniform_real(rng, -r, r);
}

struct Adam {
  std::vector<double> m, v;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  int t = 0;

  explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
  void step(std::span<double> param, std::span<const double> grad, double lr, int tstep) {
    const double c1 = 1.0 - std::pow(beta1, tstep);
    const double c2 = 1.0 - std::pow(beta2, tstep);
    for (std::size_t q = 0; q < param.size(); ++q) {
      m[q] = beta1 * m[q] + (1.0 - beta1) * grad[q];
      v[q] = beta2 * v[q] + (1.0 - beta2) * grad[q] * grad[q];
      param[q] -= lr * (m[q] / c1) / (std::sqrt(v[q] / c2) + eps);
    }
  }
};

}  // namespace

double gcn_objective(const NormalizedAdjacency& a, const FeatureMatrix& x, const LabelVector& y,
                     std::span<const std::size_t> train_idx, const DenseMatrix& w0, const DenseMatrix& w1,
                     double weight_decay, DenseMatrix* grad_w0, DenseMatrix* grad_w1) {
  check_training_rows(x, y, train_idx, "gcn_objective");
  const GcnPass p = gcn_forward(a, x, w0, w1, 0.0, nullptr);
  return gcn_backward(a, p, y, train_idx, w0, w1, weight_decay, 0.0, false, grad_w0, grad_w1);
}

GcnModel train_gcn(const NormalizedAdjacency& a, const FeatureMatrix& x, const LabelVector& y,
                   std::span<const std::size_t> train_idx, const GcnConfig& cfg) {
  check_training_rows(x, y, train_idx, "train_gcn");
  if (x.rows() != a.size()) throw ValidationError("train_gcn: feature rows do not match Â");
  if (cfg.hidden < 1 || cfg.epochs < 1) throw ValidationError("train_gcn: hidden and epochs must be >= 1");
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) throw ValidationError("train_gcn: dropout must be in [0, 1)");

  GcnModel m;
  m.config = cfg;
  m.w0 = DenseMatrix(x.cols(), static_cast<std::size_t>(cfg.hidden));
  m.w1 = DenseMatrix(static_cast<std::size_t>(cfg.hidden), static_cast<std::size_t>(y.num_classes()));
  Rng init = make_rng(derive_seed(cfg.seed, 0x6c7ULL));
  glorot(m.w0, init);
  glorot(m.w1, init);

  Adam opt0(m.w0.values().size()), opt1(m.w1.values().size());
  DenseMatrix g0, g1;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng drop = make_rng(derive_seed(cfg.seed, 0xd50ULL, static_cast<std::uint64_t>(epoch)));
    const bool active = cfg.dropout > 0.0;
    const GcnPass p = gcn_forward(a, x, m.w0, m.w1, cfg.dropout, active ? &drop : nullptr);
    const double loss = gcn_backward(a, p, y, train_idx, m.w0, m.w1, cfg.weight_decay, cfg.dropout, active, &g0, &g1);
    if (!std::isfinite(loss)) throw NumericError("train_gcn: non-finite loss at epoch " + std::to_string(epoch));
    m.loss_history.push_back(loss);
    opt0.step(m.w0.values(), g0.values(), cfg.lr, epoch);
    opt1.step(m.w1.values(), g1.values(), cfg.lr, epoch);
  }
  return m;
}

DenseMatrix gcn_probabilities(const GcnModel& m, const NormalizedAdjacency& a, const FeatureMatrix& x) {
  if (x.cols() != m.w0.rows()) throw ValidationError("gcn_probabilities: feature width does not match the model");
  if (x.rows() != a.size()) throw ValidationError("gcn_probabilities: feature rows do not match Â");
  return gcn_forward(a, x, m.w0, m.w1, 0.0, nullptr).prob;
}

LabelVector gcn_predict(const GcnModel& m, const NormalizedAdjacency& a, const FeatureMatrix& x) {
  const DenseMatrix p = gcn_probabilities(m, a, x);
  std::vector<int> out(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) out[i] = static_cast<int>(argmax_lowest(p.row(i)));
  return LabelVector(std::move(out), static_cast<int>(m.w1.cols()));
}

TransformedFeatures sgc_transform(const NormalizedAdjacency& a, const FeatureMatrix& x, int k) {
  if (k < 1) throw ValidationError("sgc_transform: k must be >= 1");
  if (x.rows() != a.size()) throw ValidationError("sgc_transform: feature rows do not match Â");
  DenseMatrix cur = x, next;
  for (int step = 0; step < k; ++step) {
    kernels::spmm(a.matrix(), cur, next);
    std::swap(cur, next);
  }
  return {std::move(cur), Provenance::sgc};
}

// ---------------------------------------------------------------------------
// Model container

namespace {

constexpr char kModelMagic[4] = {'G', 'C', 'L', 'M'};
constexpr std::uint32_t kModelVersion = 1;
constexpr std::uint32_t kKindGcn = 2;

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) throw IoError("cannot write model " + path.string());
    out_.write(kModelMagic, 4);
    u32(kModelVersion);
  }
  void u32(std::uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }
  void u64(std::uint64_t v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }
  void f64(std::span<const double> v) {
    out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  ~Writer() noexcept(false) {
    out_.flush();
    if (!out_ && std::uncaught_exceptions() == 0) throw IoError("short write to " + path_.string());
  }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open model " + path.string());
    char magic[4];
    if (!in_.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0) fail("bad magic");
    if (u32() != kModelVersion) fail("unsupported version");
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    if (!in_.read(reinterpret_cast<char*>(&v), sizeof v)) fail("truncated");
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    if (!in_.read(reinterpret_cast<char*>(&v), sizeof v)) fail("truncated");
    if (v > (1ULL << 32)) fail("implausible shape");
    return v;
  }
  void f64(std::span<double> v) {
    if (!in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double))))
      fail("truncated");
  }
  [[noreturn]] void fail(const std::string& why) { throw ParseError(path_.string() + ": " + why); }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
};

}  // namespace

void save_model(const LinearModel& m, const std::filesystem::path& path) {
  Writer w(path);
  w.u32(static_cast<std::uint32_t>(m.kind));
  w.u64(m.weights.rows());
  w.u64(m.weights.cols());
  w.f64(m.weights.values());
  w.f64(m.bias);
  w.f64(m.standardizer.mean);
  w.f64(m.standardizer.stddev);
}

void save_model(const GcnModel& m, const std::filesystem::path& path) {
  Writer w(path);
  w.u32(kKindGcn);
  w.u64(m.w0.rows());
  w.u64(m.w0.cols());
  w.u64(m.w1.cols());
  w.f64(m.w0.values());
  w.f64(m.w1.values());
}

LinearModel load_linear_model(const std::filesystem::path& path) {
  Reader r(path);
  const auto kind = r.u32();
  if (kind > 1) r.fail("not a linear model");
  LinearModel m;
  m.kind = static_cast<LinearKind>(kind);
  const auto c = r.u64(), k = r.u64();
  m.weights = DenseMatrix(c, k);
  r.f64(m.weights.values());
  m.bias.resize(c);
  r.f64(m.bias);
  m.standardizer.mean.resize(k);
  m.standardizer.stddev.resize(k);
  r.f64(m.standardizer.mean);
  r.f64(m.standardizer.stddev);
  return m;
}

GcnModel load_gcn_model(const std::filesystem::path& path) {
  Reader r(path);
  if (r.u32() != kKindGcn) r.fail("not a GCN model");
  const auto f = r.u64(), h = r.u64(), c = r.u64();
  GcnModel m;
  m.w0 = DenseMatrix(f, h);
  m.w1 = DenseMatrix(h, c);
  r.f64(m.w0.values());
  r.f64(m.w1.values());
  m.config.hidden = static_cast<int>(h);
  return m;
}

}  // namespace gcatlab
