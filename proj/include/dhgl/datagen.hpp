#pragma once

#include "dhgl/evaluation.hpp"

#include <cstdint>

namespace dhgl {

/// Hub-network generator parameters. Edges between two non-hub nodes appear
/// with background_edge_prob; any pair touching a hub uses hub_edge_prob.
/// Off-diagonal values are drawn uniformly from +-[edge_low, edge_high] per
/// ordered pair and then averaged with their transpose, so one-sided draws
/// land at half magnitude.
struct NetworkSpec {
  int p = 0;
  int hub_count = 0;
  double background_edge_prob = 0.02;
  double hub_edge_prob = 0.7;
  double edge_low = 0.25;
  double edge_high = 0.75;
  double diagonal_boost = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Sample {
  Matrix x;  // n x p, rows i.i.d. N(0, theta^{-1})
  GroundTruth truth;
  std::uint64_t seed = 0;
};

/// Splitmix-style stream derivation so one root seed yields independent
/// truth/noise streams and per-replication substreams.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

/// Builds a positive definite hub-network precision matrix. The constant
/// diagonal is |min eigenvalue of the off-diagonal part| + diagonal_boost;
/// if the PD check still fails numerically the boost doubles (up to 5 times).
GroundTruth generate_truth(const NetworkSpec& spec);

/// n i.i.d. rows with covariance theta^{-1}, via z L^{-T} with L L^T = theta.
/// Deterministic for a fixed seed.
Sample sample_gaussian(const GroundTruth& truth, int n, std::uint64_t seed);

}  // namespace dhgl
