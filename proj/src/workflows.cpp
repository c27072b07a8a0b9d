#include "dhgl/workflows.hpp"

#include <algorithm>
#include <cmath>

namespace dhgl {

void HubExtractionConfig::validate(Eigen::Index p) const {
  if (!(t > 0)) throw std::invalid_argument("HubExtractionConfig: t must be positive");
  if (r < 1 || r > p - 1)
    throw std::invalid_argument("HubExtractionConfig: r must lie in [1, p-1]");
}

std::set<int> extract_hubs(const SymmetricMatrix& theta, const HubExtractionConfig& cfg) {
  const Eigen::Index p = theta.dim();
  cfg.validate(p);
  std::set<int> hubs;
  for (Eigen::Index j = 0; j < p; ++j) {
    int degree = 0;
    for (Eigen::Index i = 0; i < p; ++i)
      if (i != j && std::abs(theta(i, j)) > cfg.t) ++degree;
    if (degree >= cfg.r) hubs.insert(static_cast<int>(j));
  }
  return hubs;
}

SolveResult run_gl(const SymmetricMatrix& s, double lambda, const AdmmConfig& admm) {
  return solve_gl(s, lambda, admm);
}

void ScreeningConfig::validate() const {
  if (a < 1) throw std::invalid_argument("ScreeningConfig: a must be >= 1");
  if (!(b > 1.0)) throw std::invalid_argument("ScreeningConfig: b must exceed 1");
  if (lambda_path.empty()) throw EmptyPath("ScreeningConfig: lambda_path is empty");
  for (std::size_t i = 1; i < lambda_path.size(); ++i)
    if (!(lambda_path[i] < lambda_path[i - 1]))
      throw std::invalid_argument("ScreeningConfig: lambda_path must be strictly descending");
}

std::vector<double> default_lambda_path(const SymmetricMatrix& s, int points) {
  const Eigen::Index p = s.dim();
  double lambda_max = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j) lambda_max = std::max(lambda_max, std::abs(s(i, j)));
  if (lambda_max <= 0.0 || points < 1) return {};
  if (points == 1) return {lambda_max};
  std::vector<double> path(static_cast<std::size_t>(points));
  const double ratio = std::log(0.01);  // down to 1% of lambda_max
  for (int k = 0; k < points; ++k)
    path[static_cast<std::size_t>(k)] =
        lambda_max * std::exp(ratio * static_cast<double>(k) / static_cast<double>(points - 1));
  return path;
}

std::vector<double> default_lambda5_grid(int points) {
  if (points < 2) return {1.0};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    grid[static_cast<std::size_t>(k)] =
        0.5 + 0.5 * static_cast<double>(k) / static_cast<double>(points - 1);
  return grid;
}

GridSpec default_grid45(const PenaltyConfig& hgl_params) {
  GridSpec g;
  g.lambda1 = {hgl_params.lambda1()};
  g.lambda2 = {hgl_params.lambda2()};
  g.lambda3 = {hgl_params.lambda3()};
  for (double f : {0.25, 0.5, 0.75}) g.lambda4.push_back(f * hgl_params.lambda2());
  for (double f : {0.1, 0.25, 0.5}) g.lambda5.push_back(f * hgl_params.lambda3());
  return g;
}

namespace {

std::set<int> set_difference(const std::set<int>& a, const std::set<int>& b) {
  std::set<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

std::set<int> set_union(const std::set<int>& a, const std::set<int>& b) {
  std::set<int> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

WorkflowResult hgl_only(SolveResult hgl_fit, std::set<int> hgl_hubs,
                        const PenaltyConfig& hgl_params) {
  WorkflowResult out;
  out.estimate = hgl_fit;
  out.hubs = hgl_hubs;
  out.provenance = Provenance::HglOnly;
  out.penalty = hgl_params;
  out.hgl_estimate = std::move(hgl_fit);
  out.hgl_hubs = std::move(hgl_hubs);
  return out;
}

}  // namespace

WorkflowResult algorithm1_known_hubs(const Matrix& x, const std::set<int>& known_hubs,
                                     const PenaltyConfig& hgl_params, const GridSpec& grid45,
                                     const HubExtractionConfig& extraction,
                                     const AdmmConfig& admm, const BicConfig& bic_cfg) {
  const SymmetricMatrix s = empirical_covariance(x);
  const int n = static_cast<int>(x.rows());
  for (int k : known_hubs)
    if (k < 0 || k >= s.dim())
      throw std::invalid_argument("algorithm1_known_hubs: known hub index out of range");

  // Step 1: baseline fit with no discriminated columns.
  SolveResult hgl_fit = solve(s, hgl_params.with_discriminated({}), admm);
  std::set<int> hgl_hubs = extract_hubs(hgl_fit.theta_hat, extraction);

  // Step 2: discriminate only the known hubs the baseline missed.
  const std::set<int> d = set_difference(known_hubs, hgl_hubs);
  if (d.empty()) return hgl_only(std::move(hgl_fit), std::move(hgl_hubs), hgl_params);

  // Step 3: refit with (lambda4, lambda5) selected by BIC, then pool hubs
  // from both fits so loosening D cannot lose hubs already found.
  GridSpec grid = grid45;
  grid.lambda1 = {hgl_params.lambda1()};
  grid.lambda2 = {hgl_params.lambda2()};
  grid.lambda3 = {hgl_params.lambda3()};
  GridSelection selected = grid_select(s, n, grid, d, admm, bic_cfg);

  WorkflowResult out;
  out.hubs = set_union(hgl_hubs, extract_hubs(selected.fit.theta_hat, extraction));
  out.estimate = std::move(selected.fit);
  out.discriminated = d;
  out.provenance = Provenance::Dhgl;
  out.penalty = selected.penalty;
  out.hgl_estimate = std::move(hgl_fit);
  out.hgl_hubs = std::move(hgl_hubs);
  return out;
}

WorkflowResult algorithm2_screening(const Matrix& x, const PenaltyConfig& hgl_params,
                                    const ScreeningConfig& screening,
                                    const std::vector<double>& lambda5_grid,
                                    const HubExtractionConfig& extraction,
                                    const AdmmConfig& admm, const BicConfig& bic_cfg) {
  screening.validate();
  const SymmetricMatrix s = empirical_covariance(x);
  const int n = static_cast<int>(x.rows());

  SolveResult hgl_fit = solve(s, hgl_params.with_discriminated({}), admm);
  std::set<int> hgl_hubs = extract_hubs(hgl_fit.theta_hat, extraction);

  // Prior-information screening: first path point that contributes a new hub
  // while keeping the pooled hub count within the cap.
  const double cap = std::max(static_cast<double>(hgl_hubs.size()) + screening.a,
                              screening.b * static_cast<double>(hgl_hubs.size()));
  std::set<int> d;
  for (double lambda : screening.lambda_path) {
    const SolveResult gl_fit = run_gl(s, lambda, admm);
    const std::set<int> gl_hubs = extract_hubs(gl_fit.theta_hat, extraction);
    const std::set<int> extra = set_difference(gl_hubs, hgl_hubs);
    if (extra.empty()) continue;
    if (static_cast<double>(set_union(gl_hubs, hgl_hubs).size()) <= cap) {
      d = extra;
      break;
    }
  }
  if (d.empty()) return hgl_only(std::move(hgl_fit), std::move(hgl_hubs), hgl_params);

  // Refit: lambda1..lambda3 unchanged, lambda4 pinned to lambda2 for
  // conservatism, lambda5 selected by BIC.
  GridSpec grid;
  grid.lambda1 = {hgl_params.lambda1()};
  grid.lambda2 = {hgl_params.lambda2()};
  grid.lambda3 = {hgl_params.lambda3()};
  grid.lambda4 = {hgl_params.lambda2()};
  grid.lambda5 = lambda5_grid;
  GridSelection selected = grid_select(s, n, grid, d, admm, bic_cfg);

  WorkflowResult out;
  out.hubs = extract_hubs(selected.fit.theta_hat, extraction);
  out.estimate = std::move(selected.fit);
  out.discriminated = d;
  out.provenance = Provenance::Dhgl;
  out.penalty = selected.penalty;
  out.hgl_estimate = std::move(hgl_fit);
  out.hgl_hubs = std::move(hgl_hubs);
  return out;
}

}  // namespace dhgl
