#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gcatlab/graph.hpp"
#include "gcatlab/spectral.hpp"

namespace gcatlab {

enum class CaseId { c1, c2, c3, c4_1 };
std::string to_string(CaseId c);
CaseId parse_case_id(const std::string& s);

inline constexpr std::array<long, 10> kLowFrequencyIndices = {1, 4, 7, 10, 13, 16, 19, 22, 25, 28};
inline constexpr std::array<long, 10> kHighFrequencyIndices = {-1, -4, -7, -10, -13, -16, -19, -22, -25, -28};
inline constexpr std::array<long, 10> kPointCounts = {10, 50, 100, 200, 300, 500, 1000, 1500, 2000, 2500};

/// One synthetic configuration. Option 1 draws heterophilous signals from
/// high-frequency eigenvectors, option 2 from scattered points. The meaning
/// of x_param / y_param follows the case:
///   c1   : x_param low-frequency index; y_param unused
///   c2   : x_param low-frequency index; y_param high index (opt 1) or point count (opt 2)
///   c3   : y_param low-frequency index; x_param high index (opt 1) or point count (opt 2)
///   c4_1 : x_param high index (opt 1) or point count (opt 2); y_param unused
struct ScenarioSpec {
  CaseId case_id = CaseId::c1;
  int option = 1;
  long x_param = 1;
  long y_param = 0;
  std::uint64_t seed = 0;
};

struct Scenario {
  FeatureMatrix x;
  LabelVector y;
  ScenarioSpec spec;
  double feature_energy = 0.0;  // S2(X)
  double label_energy = 0.0;    // S2 of the class-1 indicator
  bool x_homophilous = false;
  bool y_homophilous = false;
};

/// 1 where the value is strictly above the median, else 0.
LabelVector median_discretize(std::span<const double> x);

/// Exactly k nodes, chosen uniformly without replacement, get label 1.
LabelVector scatter_point_labels(const Graph& g, long k, std::uint64_t seed);

Scenario generate_scenario(const Graph& g, const SpectralBasis& basis, const ScenarioSpec& spec);

/// Median eigenvalue of the basis; the homophily/heterophily threshold.
double median_eigenvalue(const SpectralBasis& basis);

/// Nodes CSV (id,label,x) and provenance JSON with the scenario parameters and measured energies.
void export_scenario(const Scenario& s, const std::filesystem::path& nodes_csv,
                     const std::filesystem::path& provenance_json);

}  // namespace gcatlab
