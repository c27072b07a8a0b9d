#pragma once

#include "dhgl/workflows.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <utility>

namespace dhgl {

/// Known precision matrix and hub set behind a synthetic experiment.
struct GroundTruth {
  SymmetricMatrix theta;
  std::set<int> hubs;
};

using Edge = std::pair<int, int>;  // ordered so first < second
using EdgeSet = std::set<Edge>;

/// Pairs (j, j'), j < j', with theta_jj' != 0 exactly (ground truth).
EdgeSet true_edges(const GroundTruth& truth);
/// Subset of true_edges with at least one endpoint in the true hub set.
EdgeSet true_hub_edges(const GroundTruth& truth);
/// Pairs with |theta_jj'| > t; the boundary |theta_jj'| == t is no edge.
EdgeSet estimated_edges(const SymmetricMatrix& theta_hat, double t);

struct MetricsRecord {
  long correct_edges = 0;
  double hub_edge_proportion = 0.0;
  double hub_node_proportion = 0.0;
  double sse = 0.0;
  double hub_accuracy = 0.0;
  bool effective = false;    // hub-node measures computed excluding `excluded`
  std::set<int> excluded;    // K
  // Set when the corresponding denominator was empty and the measure was
  // reported as the vacuous 1.0.
  bool hub_edges_vacuous = false;
  bool hub_nodes_vacuous = false;
  bool accuracy_vacuous = false;
};

/// Scores an estimate against ground truth. `exclude` drops nodes from the
/// two hub-node measures (hub_node_proportion, hub_accuracy) only; edge-level
/// measures and the SSE always use the full matrix.
MetricsRecord score(const SymmetricMatrix& theta_hat, const GroundTruth& truth,
                    const HubExtractionConfig& extraction, const std::set<int>& exclude = {});

std::string metrics_csv_header();
std::string metrics_csv_row(int replication, const std::string& method,
                            const MetricsRecord& rec, std::uint64_t seed);

}  // namespace dhgl
