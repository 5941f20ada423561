#include "gcatlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "gcatlab/error.hpp"
#include "gcatlab/rng.hpp"

namespace gcatlab {

std::string to_string(CaseId c) {
  switch (c) {
    case CaseId::c1: return "1";
    case CaseId::c2: return "2";
    case CaseId::c3: return "3";
    case CaseId::c4_1: return "4_1";
  }
  return "?";
}

CaseId parse_case_id(const std::string& s) {
  if (s == "1") return CaseId::c1;
  if (s == "2") return CaseId::c2;
  if (s == "3") return CaseId::c3;
  if (s == "4_1" || s == "4-1" || s == "4") return CaseId::c4_1;
  throw ValidationError("unknown case id '" + s + "' (expected 1, 2, 3 or 4_1)");
}

LabelVector median_discretize(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("median_discretize: need at least two values");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // Spread at rounding level means a constant vector; splitting it would label noise.
  const double scale = std::max(std::abs(sorted.front()), std::abs(sorted.back()));
  if (sorted.back() - sorted.front() <= 1e-10 * std::max(scale, 1e-300))
    throw ValidationError("median_discretize: input is numerically constant");
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  std::vector<int> labels(n);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = x[i] > median ? 1 : 0;
    ones += static_cast<std::size_t>(labels[i]);
  }
  if (ones == 0 || ones == n) throw ValidationError("median_discretize: one class is empty (constant input?)");
  return LabelVector(std::move(labels), 2);
}

LabelVector scatter_point_labels(const Graph& g, long k, std::uint64_t seed) {
  const auto n = static_cast<long>(g.num_nodes());
  if (k < 1 || k >= n)
    throw ValidationError("scatter_point_labels: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + ")");
  std::vector<std::uint32_t> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0u);
  Rng rng = make_rng(derive_seed(seed, 0x5ca7ULL));
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (long i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(i) + uniform_index(rng, static_cast<std::uint64_t>(n - i));
    std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
  }
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (long i = 0; i < k; ++i) labels[ids[static_cast<std::size_t>(i)]] = 1;
  return LabelVector(std::move(labels), 2);
}

double median_eigenvalue(const SpectralBasis& basis) {
  const std::size_t n = basis.size();
  if (n == 0) throw ValidationError("median_eigenvalue: empty basis");
  return n % 2 == 1 ? basis.eigenvalues[n / 2] : 0.5 * (basis.eigenvalues[n / 2 - 1] + basis.eigenvalues[n / 2]);
}

namespace {

void require_low(long idx) {
  if (idx < 0) throw ValidationError("expected a low-frequency (non-negative) eigenvector index, got " + std::to_string(idx));
}
void require_high(long idx) {
  if (idx >= 0) throw ValidationError("expected a high-frequency (negative) eigenvector index, got " + std::to_string(idx));
}

std::vector<double> indicator(const LabelVector& y) {
  std::vector<double> v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v[i] = static_cast<double>(y[i]);
  return v;
}

}  // namespace

Scenario generate_scenario(const Graph& g, const SpectralBasis& basis, const ScenarioSpec& spec) {
  if (basis.size() != g.num_nodes()) throw ValidationError("generate_scenario: basis size does not match graph");
  if (spec.option != 1 && spec.option != 2) throw ValidationError("generate_scenario: option must be 1 or 2");

  std::vector<double> x;
  LabelVector y;
  switch (spec.case_id) {
    case CaseId::c1:
      require_low(spec.x_param);
      x = select_eigenvector(basis, spec.x_param);
      y = median_discretize(x);
      break;
    case CaseId::c2:
      require_low(spec.x_param);
      x = select_eigenvector(basis, spec.x_param);
      if (spec.option == 1) {
        require_high(spec.y_param);
        y = median_discretize(select_eigenvector(basis, spec.y_param));
      } else {
        y = scatter_point_labels(g, spec.y_param, spec.seed);
      }
      break;
    case CaseId::c3:
      require_low(spec.y_param);
      y = median_discretize(select_eigenvector(basis, spec.y_param));
      if (spec.option == 1) {
        require_high(spec.x_param);
        x = select_eigenvector(basis, spec.x_param);
      } else {
        x = indicator(scatter_point_labels(g, spec.x_param, spec.seed));
      }
      break;
    case CaseId::c4_1:
      if (spec.option == 1) {
        require_high(spec.x_param);
        x = select_eigenvector(basis, spec.x_param);
        y = median_discretize(x);
      } else {
        // The indicator is already binary; its discretization is the scatter labelling itself.
        y = scatter_point_labels(g, spec.x_param, spec.seed);
        x = indicator(y);
      }
      break;
  }

  Scenario s;
  s.spec = spec;
  s.x = DenseMatrix::column(x);
  s.y = std::move(y);
  s.feature_energy = dirichlet_energy(g, x);
  s.label_energy = dirichlet_energy(g, indicator(s.y));
  const bool x_from_low = spec.case_id == CaseId::c1 || spec.case_id == CaseId::c2;
  const bool y_from_low = spec.case_id == CaseId::c1 || spec.case_id == CaseId::c3;
  s.x_homophilous = x_from_low;
  s.y_homophilous = y_from_low;
  return s;
}

void export_scenario(const Scenario& s, const std::filesystem::path& nodes_csv,
                     const std::filesystem::path& provenance_json) {
  {
    std::ofstream out(nodes_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + nodes_csv.string());
    out << "id,label,x\n";
    char buf[40];
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.x(i, 0));
      out << i << ',' << s.y[i] << ',' << buf << '\n';
    }
    if (!out) throw IoError("short write to " + nodes_csv.string());
  }
  nlohmann::ordered_json j;
  j["case"] = to_string(s.spec.case_id);
  j["option"] = s.spec.option;
  j["x_param"] = s.spec.x_param;
  j["y_param"] = s.spec.y_param;
  j["seed"] = s.spec.seed;
  j["index_convention"] = "0-based ascending; negative indices count from the top of the spectrum";
  j["scatter_feature"] = "indicator vector of the scattered nodes";
  j["feature_energy"] = s.feature_energy;
  j["label_energy"] = s.label_energy;
  j["x_homophilous"] = s.x_homophilous;
  j["y_homophilous"] = s.y_homophilous;
  std::ofstream out(provenance_json, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + provenance_json.string());
  out << j.dump(2) << '\n';
}

}  // namespace gcatlab
