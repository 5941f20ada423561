#include "gcatlab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "gcatlab/error.hpp"
#include "gcatlab/kernels.hpp"

namespace gcatlab {

// ---------------------------------------------------------------------------
// Graph

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges, DuplicateEdges policy) {
  if (num_nodes == 0) throw ValidationError("graph must have at least one node");
  if (num_nodes > UINT32_MAX) throw ValidationError("graph too large");

  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes)
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") references a node outside 0.." + std::to_string(num_nodes - 1));
    if (e.u == e.v) throw ValidationError("self-loop on node " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") has non-positive or non-finite weight");
    canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::stable_sort(canon.begin(), canon.end(),
                   [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });

  std::vector<Triplet> triplets;
  triplets.reserve(2 * canon.size());
  for (std::size_t k = 0; k < canon.size(); ++k) {
    const auto& e = canon[k];
    if (k > 0 && canon[k - 1].u == e.u && canon[k - 1].v == e.v) {
      if (policy == DuplicateEdges::reject || canon[k - 1].w != e.w)
        throw ValidationError("duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
      continue;
    }
    triplets.push_back({e.u, e.v, e.w});
    triplets.push_back({e.v, e.u, e.w});
  }
  Graph g;
  g.adjacency_ = csr_from_triplets(num_nodes, num_nodes, std::move(triplets));
  return g;
}

double Graph::degree(std::size_t u) const noexcept {
  double d = 0.0;
  for (double w : neighbor_weights(u)) d += w;
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    auto nb = neighbors(u);
    auto wt = neighbor_weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (u < nb[k]) out.push_back({static_cast<std::uint32_t>(u), nb[k], wt[k]});
  }
  return out;
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const auto id = static_cast<std::uint32_t>(r * cols + c);
      if (c + 1 < cols) edges.push_back({id, id + 1, 1.0});
      if (r + 1 < rows) edges.push_back({id, static_cast<std::uint32_t>(id + cols), 1.0});
    }
  return Graph::from_edges(rows * cols, edges);
}

// ---------------------------------------------------------------------------
// Edge-list text format

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Graph parse_edge_list(std::string_view text, std::string_view source) {
  std::vector<Edge> edges;
  std::size_t declared_n = 0;
  bool have_header = false;
  bool seen_data = false;
  std::size_t max_id = 0;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& why) {
    return ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " + why);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tok = split_ws(line);

    if (tok[0] == "N") {
      if (seen_data || have_header) throw fail("node-count header must precede all edges");
      if (tok.size() != 2 || !parse_number(tok[1], declared_n) || declared_n == 0)
        throw fail("expected 'N <count>'");
      have_header = true;
      continue;
    }
    if (tok.size() < 2 || tok.size() > 3) throw fail("expected 'u v [w]'");
    std::uint32_t u = 0, v = 0;
    double w = 1.0;
    if (!parse_number(tok[0], u) || !parse_number(tok[1], v)) throw fail("node ids must be non-negative integers");
    if (tok.size() == 3 && !parse_number(tok[2], w)) throw fail("weight is not a number");
    if (u == v)
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": self-loop on node " +
                            std::to_string(u));
    if (!(w > 0.0) || !std::isfinite(w))
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                            ": edge weight must be positive and finite");
    seen_data = true;
    max_id = std::max<std::size_t>(max_id, std::max(u, v));
    edges.push_back({u, v, w});
  }

  std::size_t n = seen_data ? max_id + 1 : 0;
  if (have_header) {
    if (declared_n < n)
      throw ValidationError(std::string(source) + ": header declares " + std::to_string(declared_n) +
                            " nodes but ids reach " + std::to_string(max_id));
    n = declared_n;
  }
  if (n == 0) throw ValidationError(std::string(source) + ": no edges and no node-count header");
  return Graph::from_edges(n, edges, DuplicateEdges::merge_equal);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open edge list " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str(), path.string());
}

// ---------------------------------------------------------------------------
// Labels

LabelVector::LabelVector(std::vector<int> labels, int num_classes) : labels_(std::move(labels)) {
  int max_label = -1;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0) throw ValidationError("label at index " + std::to_string(i) + " is negative");
    max_label = std::max(max_label, labels_[i]);
  }
  if (num_classes == 0) num_classes = std::max(2, max_label + 1);
  if (num_classes < 2) throw ValidationError("a label vector needs at least two classes");
  if (max_label >= num_classes)
    throw ValidationError("label " + std::to_string(max_label) + " outside [0, " + std::to_string(num_classes) + ")");
  num_classes_ = num_classes;
}

std::vector<std::size_t> LabelVector::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes_), 0);
  for (int y : labels_) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

// ---------------------------------------------------------------------------
// Operators

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::raw: return "raw";
    case Provenance::gconv: return "gconv";
    case Provenance::gcat: return "gcat";
    case Provenance::sgc: return "sgc";
  }
  return "unknown";
}

NormalizedAdjacency normalized_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(1.0 + g.degree(i));

  const auto& w = g.adjacency();
  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.assign(n + 1, 0);
  m.col_idx.reserve(w.nnz() + n);
  m.values.reserve(w.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    bool diag_done = false;
    auto put_diag = [&] {
      m.col_idx.push_back(static_cast<std::uint32_t>(i));
      m.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
      diag_done = true;
    };
    auto cols = w.row_cols(i);
    auto vals = w.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (!diag_done && cols[k] > i) put_diag();
      m.col_idx.push_back(cols[k]);
      m.values.push_back(inv_sqrt[i] * vals[k] * inv_sqrt[cols[k]]);
    }
    if (!diag_done) put_diag();
    m.row_ptr[i + 1] = m.values.size();
  }
  return NormalizedAdjacency(std::move(m));
}

CsrMatrix laplacian_sparse(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<Triplet> t;
  t.reserve(g.adjacency().nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), g.degree(i)});
    auto nb = g.neighbors(i);
    auto wt = g.neighbor_weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) t.push_back({static_cast<std::uint32_t>(i), nb[k], -wt[k]});
  }
  return csr_from_triplets(n, n, std::move(t));
}

DenseMatrix laplacian(const Graph& g) { return laplacian_sparse(g).to_dense(); }

double dirichlet_energy(const Graph& g, std::span<const double> x) {
  if (x.size() != g.num_nodes())
    throw ValidationError("dirichlet_energy: signal has length " + std::to_string(x.size()) + ", graph has " +
                          std::to_string(g.num_nodes()) + " nodes");
  // Each undirected edge appears twice in the CSR, so the ½ cancels.
  double s = 0.0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    auto nb = g.neighbors(i);
    auto wt = g.neighbor_weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] < i) continue;
      const double d = x[nb[k]] - x[i];
      s += wt[k] * d * d;
    }
  }
  return s;
}

double dirichlet_energy_matrix(const Graph& g, const FeatureMatrix& x) {
  if (x.rows() != g.num_nodes())
    throw ValidationError("dirichlet_energy_matrix: feature matrix has " + std::to_string(x.rows()) +
                          " rows, graph has " + std::to_string(g.num_nodes()) + " nodes");
  double total = 0.0;
  for (std::size_t k = 0; k < x.cols(); ++k) total += dirichlet_energy(g, x.col(k));
  return total;
}

TransformedFeatures gconv(const NormalizedAdjacency& a, const FeatureMatrix& x) {
  if (x.rows() != a.size())
    throw ValidationError("gconv: Â is " + std::to_string(a.size()) + "x" + std::to_string(a.size()) +
                          ", X has " + std::to_string(x.rows()) + " rows");
  TransformedFeatures z{DenseMatrix{}, Provenance::gconv};
  kernels::spmm(a.matrix(), x, z.data);
  return z;
}

TransformedFeatures gcat(const DenseMatrix& repr, const FeatureMatrix& x) {
  if (repr.rows() != x.rows())
    throw ValidationError("gcat: structure representation has " + std::to_string(repr.rows()) +
                          " rows, X has " + std::to_string(x.rows()));
  TransformedFeatures z{DenseMatrix{}, Provenance::gcat};
  kernels::hconcat(repr, x, z.data);
  return z;
}

}  // namespace gcatlab
