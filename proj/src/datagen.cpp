#include "dhgl/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace dhgl {

void NetworkSpec::validate() const {
  if (p < 1) throw std::invalid_argument("NetworkSpec: p must be >= 1");
  if (hub_count < 0 || hub_count >= p)
    throw std::invalid_argument("NetworkSpec: hub_count must lie in [0, p)");
  if (background_edge_prob < 0 || background_edge_prob > 1 || hub_edge_prob < 0 ||
      hub_edge_prob > 1)
    throw std::invalid_argument("NetworkSpec: edge probabilities must lie in [0, 1]");
  if (!(0 < edge_low && edge_low <= edge_high))
    throw std::invalid_argument("NetworkSpec: need 0 < edge_low <= edge_high");
  if (!(diagonal_boost > 0))
    throw std::invalid_argument("NetworkSpec: diagonal_boost must be positive");
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t x = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

GroundTruth generate_truth(const NetworkSpec& spec) {
  spec.validate();
  const int p = spec.p;
  std::mt19937_64 rng(derive_seed(spec.seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> magnitude(spec.edge_low, spec.edge_high);

  std::vector<int> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::set<int> hubs(order.begin(), order.begin() + spec.hub_count);

  Matrix raw = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      const double prob =
          (hubs.count(i) || hubs.count(j)) ? spec.hub_edge_prob : spec.background_edge_prob;
      if (unit(rng) < prob) {
        const double value = magnitude(rng);
        raw(i, j) = unit(rng) < 0.5 ? value : -value;
      }
    }

  const SymmetricMatrix offdiag = SymmetricMatrix::symmetrized(raw);
  const double min_eig = sym_eigen(offdiag).values.minCoeff();

  double boost = spec.diagonal_boost;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Matrix theta = offdiag.mat();
    theta.diagonal().setConstant(std::abs(min_eig) + boost);
    const SymmetricMatrix candidate = SymmetricMatrix::symmetrized(theta);
    if (sym_eigen(candidate).values.minCoeff() > 0.0)
      return GroundTruth{candidate, hubs};
    boost *= 2.0;
  }
  throw std::runtime_error("generate_truth: could not reach positive definiteness");
}

Sample sample_gaussian(const GroundTruth& truth, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gaussian: n must be >= 1");
  const Eigen::Index p = truth.theta.dim();
  const Matrix chol_lower = cholesky(truth.theta);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // x = L^{-T} z has covariance (L L^T)^{-1} = theta^{-1}.
  Matrix x(n, p);
  Vector z(p);
  for (int row = 0; row < n; ++row) {
    for (Eigen::Index k = 0; k < p; ++k) z(k) = normal(rng);
    x.row(row) = chol_lower.transpose().triangularView<Eigen::Upper>().solve(z).transpose();
  }
  return Sample{std::move(x), truth, seed};
}

}  // namespace dhgl
