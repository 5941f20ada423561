#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gcatlab/dense.hpp"
#include "gcatlab/graph.hpp"
#include "gcatlab/rng.hpp"

namespace gcatlab {

struct WalkParams {
  int walks_per_node = 10;
  int walk_length = 80;
  std::uint64_t seed = 0;
};

/// Walks are stored epoch-major: walk (epoch, slot) at index epoch * N + slot,
/// where the slot order is a seeded shuffle of the nodes for that epoch.
struct WalkCorpus {
  std::vector<std::vector<std::uint32_t>> walks;
  WalkParams params;
  std::size_t num_nodes = 0;

  std::size_t num_tokens() const noexcept;
};

/// Uniform random walks with transition probability proportional to edge
/// weight. Walks from isolated nodes have length 1.
WalkCorpus random_walks(const Graph& g, int walks_per_node, int walk_length, std::uint64_t seed);

struct SkipGramParams {
  int dim = 256;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;
  std::uint64_t seed = 0;
  /// 1 gives bit-reproducible training; more threads update without locks.
  int threads = 1;
};

using EmbeddingMatrix = DenseMatrix;

/// Skip-gram with negative sampling over the corpus; returns the input-side vectors.
EmbeddingMatrix train_skipgram(const WalkCorpus& corpus, const SkipGramParams& params);

struct DeepWalkParams {
  WalkParams walks;
  SkipGramParams skipgram;
};

/// random_walks + train_skipgram with the usual DeepWalk settings.
EmbeddingMatrix deepwalk(const Graph& g, int dim = 256, std::uint64_t seed = 0);
EmbeddingMatrix deepwalk(const Graph& g, const DeepWalkParams& params);

/// Walker alias table for O(1) sampling from a discrete distribution.
class AliasSampler {
 public:
  AliasSampler() = default;
  explicit AliasSampler(std::span<const double> weights);
  std::uint32_t sample(Rng& rng) const;
  std::size_t size() const noexcept { return prob_.size(); }
  /// Normalized probability of outcome i, as reconstructed from the table.
  double probability(std::size_t i) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Negative-sampling distribution: corpus token counts raised to 0.75.
AliasSampler unigram_sampler(const WalkCorpus& corpus, double power = 0.75);

/// TSV: "<node>\t<v0>\t...\t<vd-1>" per line, 17 significant digits.
void save_embedding_tsv(const EmbeddingMatrix& e, const std::filesystem::path& path);
EmbeddingMatrix load_embedding_tsv(const std::filesystem::path& path);

}  // namespace gcatlab
