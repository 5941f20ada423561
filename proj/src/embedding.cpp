#include "gcatlab/embedding.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "gcatlab/error.hpp"

namespace gcatlab {

std::size_t WalkCorpus::num_tokens() const noexcept {
  std::size_t t = 0;
  for (const auto& w : walks) t += w.size();
  return t;
}

WalkCorpus random_walks(const Graph& g, int walks_per_node, int walk_length, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw ValidationError("random_walks: empty graph");
  if (walks_per_node < 1 || walk_length < 1)
    throw ValidationError("random_walks: walks_per_node and walk_length must be >= 1");

  // Cumulative weights per node for proportional neighbour choice.
  const auto& adj = g.adjacency();
  std::vector<double> cumulative(adj.nnz());
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (std::size_t p = adj.row_ptr[u]; p < adj.row_ptr[u + 1]; ++p) cumulative[p] = (acc += adj.values[p]);
  }

  WalkCorpus corpus;
  corpus.params = {walks_per_node, walk_length, seed};
  corpus.num_nodes = n;
  corpus.walks.resize(n * static_cast<std::size_t>(walks_per_node));

  Rng order_rng = make_rng(derive_seed(seed, 0x5157ULL));
  std::vector<std::uint32_t> order(n);
  for (int epoch = 0; epoch < walks_per_node; ++epoch) {
    std::iota(order.begin(), order.end(), 0u);
    shuffle(std::span<std::uint32_t>(order), order_rng);
    const std::size_t base = static_cast<std::size_t>(epoch) * n;
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t slot = 0; slot < nn; ++slot) {
      const std::uint32_t start = order[static_cast<std::size_t>(slot)];
      Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(epoch) + 1, start));
      auto& walk = corpus.walks[base + static_cast<std::size_t>(slot)];
      walk.reserve(static_cast<std::size_t>(walk_length));
      walk.push_back(start);
      std::uint32_t cur = start;
      while (walk.size() < static_cast<std::size_t>(walk_length)) {
        const std::size_t lo = adj.row_ptr[cur], hi = adj.row_ptr[cur + 1];
        if (lo == hi) break;
        std::size_t pick;
        if (hi - lo == 1) {
          pick = lo;
        } else {
          const double r = uniform01(rng) * cumulative[hi - 1];
          pick = static_cast<std::size_t>(std::upper_bound(cumulative.begin() + static_cast<std::ptrdiff_t>(lo),
                                                           cumulative.begin() + static_cast<std::ptrdiff_t>(hi), r) -
                                          cumulative.begin());
          pick = std::min(pick, hi - 1);
        }
        cur = adj.col_idx[pick];
        walk.push_back(cur);
      }
    }
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Alias sampling

AliasSampler::AliasSampler(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw ValidationError("AliasSampler: no outcomes");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("AliasSampler: weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("AliasSampler: all weights are zero");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) prob_[i] = 1.0;
  for (auto i : small) prob_[i] = 1.0;  // round-off leftovers
  for (std::size_t i = 0; i < n; ++i) alias_[i] = prob_[i] >= 1.0 ? static_cast<std::uint32_t>(i) : alias_[i];
}

std::uint32_t AliasSampler::sample(Rng& rng) const {
  const auto i = static_cast<std::uint32_t>(uniform_index(rng, prob_.size()));
  return uniform01(rng) < prob_[i] ? i : alias_[i];
}

double AliasSampler::probability(std::size_t i) const {
  double p = prob_[i];
  for (std::size_t j = 0; j < prob_.size(); ++j)
    if (alias_[j] == i && j != i) p += 1.0 - prob_[j];
  return p / static_cast<double>(prob_.size());
}

AliasSampler unigram_sampler(const WalkCorpus& corpus, double power) {
  std::vector<double> counts(corpus.num_nodes, 0.0);
  for (const auto& w : corpus.walks)
    for (auto v : w) counts[v] += 1.0;
  for (auto& c : counts) c = std::pow(c, power);
  return AliasSampler(counts);
}

// ---------------------------------------------------------------------------
// Skip-gram

namespace {

inline float sigmoid(float x) {
  if (x > 30.f) return 1.f;
  if (x < -30.f) return 0.f;
  return 1.f / (1.f + std::exp(-x));
}

inline float dotf(const float* __restrict a, const float* __restrict b, std::size_t n) {
  float s = 0.f;
#pragma omp simd reduction(+ : s)
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

// y += g * x
inline void axpyf(float g, const float* __restrict x, float* __restrict y, std::size_t n) {
#pragma omp simd
  for (std::size_t k = 0; k < n; ++k) y[k] += g * x[k];
}

}  // namespace

EmbeddingMatrix train_skipgram(const WalkCorpus& corpus, const SkipGramParams& p) {
  if (corpus.walks.empty() || corpus.num_nodes == 0) throw ValidationError("train_skipgram: empty corpus");
  if (p.dim < 1 || p.window < 1 || p.negatives < 1 || p.epochs < 1)
    throw ValidationError("train_skipgram: dim, window, negatives and epochs must be >= 1");
  if (!(p.lr > 0.0)) throw ValidationError("train_skipgram: learning rate must be positive");

  const std::size_t n = corpus.num_nodes;
  const auto dim = static_cast<std::size_t>(p.dim);
  std::vector<float> in_vec(n * dim), out_vec(n * dim, 0.f);
  {
    Rng init = make_rng(derive_seed(p.seed, 0x1417ULL));
    const double half = 0.5 / static_cast<double>(dim);
    for (auto& x : in_vec) x = static_cast<float>(uniform_real(init, -half, half));
  }
  const AliasSampler negatives = unigram_sampler(corpus);

  const std::size_t num_walks = corpus.walks.size();
  const double total_steps = static_cast<double>(p.epochs) * static_cast<double>(num_walks);
  const auto nw = static_cast<std::ptrdiff_t>(num_walks);

  for (int epoch = 0; epoch < p.epochs; ++epoch) {
#pragma omp parallel num_threads(std::max(1, p.threads))
    {
      std::vector<float> grad(dim);
#pragma omp for schedule(dynamic, 16)
      for (std::ptrdiff_t wi = 0; wi < nw; ++wi) {
        const auto& walk = corpus.walks[static_cast<std::size_t>(wi)];
        Rng rng = make_rng(derive_seed(p.seed, static_cast<std::uint64_t>(epoch) + 1, static_cast<std::uint64_t>(wi)));
        const double progress = (static_cast<double>(epoch) * static_cast<double>(num_walks) + static_cast<double>(wi)) /
                                total_steps;
        const auto alpha = static_cast<float>(p.lr * std::max(1.0 - progress, 1e-4));
        const auto len = static_cast<std::ptrdiff_t>(walk.size());

        for (std::ptrdiff_t i = 0; i < len; ++i) {
          const auto reach = static_cast<std::ptrdiff_t>(p.window) -
                             static_cast<std::ptrdiff_t>(uniform_index(rng, static_cast<std::uint64_t>(p.window)));
          const std::uint32_t center = walk[static_cast<std::size_t>(i)];
          for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - reach); j <= std::min(len - 1, i + reach); ++j) {
            if (j == i) continue;
            const std::uint32_t context = walk[static_cast<std::size_t>(j)];
            float* src = in_vec.data() + static_cast<std::size_t>(context) * dim;
            std::fill(grad.begin(), grad.end(), 0.f);
            for (int d = 0; d <= p.negatives; ++d) {
              std::uint32_t target;
              float label;
              if (d == 0) {
                target = center;
                label = 1.f;
              } else {
                target = negatives.sample(rng);
                if (target == center) continue;
                label = 0.f;
              }
              float* dst = out_vec.data() + static_cast<std::size_t>(target) * dim;
              const float g = (label - sigmoid(dotf(src, dst, dim))) * alpha;
              axpyf(g, dst, grad.data(), dim);
              axpyf(g, src, dst, dim);
            }
            axpyf(1.f, grad.data(), src, dim);
          }
        }
      }
    }
  }

  EmbeddingMatrix out(n, dim);
  for (std::size_t i = 0; i < n * dim; ++i) out.values()[i] = static_cast<double>(in_vec[i]);
  if (!out.all_finite()) throw NumericError("train_skipgram: embedding diverged");
  return out;
}

EmbeddingMatrix deepwalk(const Graph& g, const DeepWalkParams& params) {
  const auto corpus = random_walks(g, params.walks.walks_per_node, params.walks.walk_length, params.walks.seed);
  return train_skipgram(corpus, params.skipgram);
}

EmbeddingMatrix deepwalk(const Graph& g, int dim, std::uint64_t seed) {
  DeepWalkParams p;
  p.walks.seed = seed;
  p.skipgram.dim = dim;
  p.skipgram.seed = derive_seed(seed, 0xd33bULL);
  return deepwalk(g, p);
}

// ---------------------------------------------------------------------------
// TSV

void save_embedding_tsv(const EmbeddingMatrix& e, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write embedding " + path.string());
  char buf[40];
  for (std::size_t i = 0; i < e.rows(); ++i) {
    out << i;
    for (double v : e.row(i)) {
      std::snprintf(buf, sizeof(buf), "\t%.17g", v);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("short write to " + path.string());
}

EmbeddingMatrix load_embedding_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding " + path.string());
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  std::string line;
  std::size_t line_no = 0, dim = 0, max_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> vals;
    std::size_t id = 0;
    bool first = true;
    while (std::getline(ls, tok, '\t')) {
      if (first) {
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
          throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad node id");
        first = false;
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad value '" + tok + "'");
      vals.push_back(v);
    }
    if (rows.empty()) dim = vals.size();
    if (vals.size() != dim || dim == 0)
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": inconsistent dimension");
    max_id = std::max(max_id, id);
    rows.emplace_back(id, std::move(vals));
  }
  if (rows.empty()) throw ParseError(path.string() + ": no rows");
  if (rows.size() != max_id + 1) throw ParseError(path.string() + ": node ids must cover 0..N-1 exactly once");
  EmbeddingMatrix e(rows.size(), dim);
  std::vector<bool> seen(rows.size(), false);
  for (auto& [id, vals] : rows) {
    if (seen[id]) throw ParseError(path.string() + ": duplicate node id " + std::to_string(id));
    seen[id] = true;
    std::copy(vals.begin(), vals.end(), e.row(id).begin());
  }
  return e;
}

}  // namespace gcatlab
