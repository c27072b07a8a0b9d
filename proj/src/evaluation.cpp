#include "dhgl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dhgl {

EdgeSet true_edges(const GroundTruth& truth) {
  const Eigen::Index p = truth.theta.dim();
  EdgeSet edges;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j)
      if (truth.theta(i, j) != 0.0) edges.emplace(static_cast<int>(i), static_cast<int>(j));
  return edges;
}

EdgeSet true_hub_edges(const GroundTruth& truth) {
  EdgeSet hub_edges;
  for (const Edge& e : true_edges(truth))
    if (truth.hubs.count(e.first) || truth.hubs.count(e.second)) hub_edges.insert(e);
  return hub_edges;
}

EdgeSet estimated_edges(const SymmetricMatrix& theta_hat, double t) {
  if (!(t > 0)) throw std::invalid_argument("estimated_edges: t must be positive");
  const Eigen::Index p = theta_hat.dim();
  EdgeSet edges;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j)
      if (std::abs(theta_hat(i, j)) > t) edges.emplace(static_cast<int>(i), static_cast<int>(j));
  return edges;
}

namespace {

EdgeSet intersect(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

}  // namespace

MetricsRecord score(const SymmetricMatrix& theta_hat, const GroundTruth& truth,
                    const HubExtractionConfig& extraction, const std::set<int>& exclude) {
  const Eigen::Index p = truth.theta.dim();
  if (theta_hat.dim() != p) throw DimensionMismatch("score: dimension mismatch");
  for (int k : exclude)
    if (k < 0 || k >= p) throw std::invalid_argument("score: excluded index out of range");

  MetricsRecord rec;
  rec.effective = !exclude.empty();
  rec.excluded = exclude;

  const EdgeSet truth_edges = true_edges(truth);
  const EdgeSet truth_hub = true_hub_edges(truth);
  const EdgeSet est = estimated_edges(theta_hat, extraction.t);

  rec.correct_edges = static_cast<long>(intersect(est, truth_edges).size());

  if (truth_hub.empty()) {
    rec.hub_edge_proportion = 1.0;  // vacuous: nothing to recover
    rec.hub_edges_vacuous = true;
  } else {
    rec.hub_edge_proportion = static_cast<double>(intersect(est, truth_hub).size()) /
                              static_cast<double>(truth_hub.size());
  }

  const std::set<int> est_hubs = extract_hubs(theta_hat, extraction);

  long hub_denom = 0, hub_hits = 0;
  for (int h : truth.hubs) {
    if (exclude.count(h)) continue;
    ++hub_denom;
    if (est_hubs.count(h)) ++hub_hits;
  }
  if (hub_denom == 0) {
    rec.hub_node_proportion = 1.0;
    rec.hub_nodes_vacuous = true;
  } else {
    rec.hub_node_proportion = static_cast<double>(hub_hits) / static_cast<double>(hub_denom);
  }

  long considered = 0, classified = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const int node = static_cast<int>(j);
    if (exclude.count(node)) continue;
    ++considered;
    if ((est_hubs.count(node) > 0) == (truth.hubs.count(node) > 0)) ++classified;
  }
  if (considered == 0) {
    rec.hub_accuracy = 1.0;
    rec.accuracy_vacuous = true;
  } else {
    rec.hub_accuracy = static_cast<double>(classified) / static_cast<double>(considered);
  }

  rec.sse = (theta_hat.mat() - truth.theta.mat()).squaredNorm();
  return rec;
}

std::string metrics_csv_header() {
  return "replication,method,correct_edges,hub_edge_prop,hub_node_prop,sse,hub_accuracy,"
         "effective,seed";
}

std::string metrics_csv_row(int replication, const std::string& method,
                            const MetricsRecord& rec, std::uint64_t seed) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%s,%ld,%.15g,%.15g,%.15g,%.15g,%d,%llu", replication,
                method.c_str(), rec.correct_edges, rec.hub_edge_proportion,
                rec.hub_node_proportion, rec.sse, rec.hub_accuracy, rec.effective ? 1 : 0,
                static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace dhgl
