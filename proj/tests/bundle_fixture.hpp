#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gcatlab/rng.hpp"

namespace gcatlab::test {

/// Writes a citation-style bundle: a planted-partition graph whose classes are
/// denser inside than across, and sparse binary features with class-dependent
/// word rates. Node ids are strings, labels are names, both CSVs have headers.
inline void write_planted_bundle(const std::filesystem::path& dir, std::size_t n, int classes, std::size_t features,
                                 std::uint64_t seed, double p_in = 0.02, double p_out = 0.002) {
  std::filesystem::create_directories(dir);
  Rng rng = make_rng(seed);
  std::vector<int> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(classes)));

  std::ofstream nodes(dir / "nodes.csv");
  nodes << "id,label";
  for (std::size_t f = 0; f < features; ++f) nodes << ",w" << f;
  nodes << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    nodes << "doc" << i << ",topic_" << char('A' + label[i]);
    for (std::size_t f = 0; f < features; ++f) {
      const bool own = static_cast<int>(f % static_cast<std::size_t>(classes)) == label[i];
      nodes << ',' << (uniform01(rng) < (own ? 0.08 : 0.03) ? 1 : 0);
    }
    nodes << '\n';
  }

  std::ofstream edges(dir / "edges.csv");
  edges << "source,target\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(rng) < (label[i] == label[j] ? p_in : p_out)) edges << "doc" << i << ",doc" << j << '\n';
}

}  // namespace gcatlab::test
