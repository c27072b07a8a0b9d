#include "dhgl/selection.hpp"

#include <array>
#include <cmath>
#include <iostream>

namespace dhgl {

void BicConfig::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("BicConfig: c must lie in (0, 1)");
  if (count_tolerance < 0.0)
    throw std::invalid_argument("BicConfig: count_tolerance must be nonnegative");
}

double bic(const SolveResult& fit, const SymmetricMatrix& s, int n, const BicConfig& cfg) {
  cfg.validate();
  if (n < 2) throw std::invalid_argument("bic: n must be >= 2");
  const Eigen::Index p = fit.theta_hat.dim();
  if (s.dim() != p) throw DimensionMismatch("bic: S dimension mismatch");

  const EigenDecomposition eig = sym_eigen(fit.theta_hat);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveDefinite("bic: Theta is not positive definite");
  const double log_det = eig.values.array().log().sum();
  const double trace_term = (s.mat().cwiseProduct(fit.theta_hat.mat())).sum();

  const double tol = cfg.count_tolerance;
  long z_card = 0;  // unique (upper-triangle) off-diagonal nonzeros
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j)
      if (std::abs(fit.z_hat(i, j)) > tol) ++z_card;

  long v_card = 0;  // all off-diagonal nonzeros of the (asymmetric) V
  long hub_count = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    long col_nonzeros = 0;
    for (Eigen::Index i = 0; i < p; ++i)
      if (std::abs(fit.v_hat(i, j)) > tol) {
        ++col_nonzeros;
        if (i != j) ++v_card;
      }
    if (col_nonzeros > 1) ++hub_count;
  }

  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  return -nd * log_det + nd * trace_term + log_n * static_cast<double>(z_card) +
         log_n * (static_cast<double>(hub_count) +
                  cfg.c * static_cast<double>(v_card - hub_count));
}

GridSpec GridSpec::single(const PenaltyConfig& cfg) {
  GridSpec g;
  g.lambda1 = {cfg.lambda1()};
  g.lambda2 = {cfg.lambda2()};
  g.lambda3 = {cfg.lambda3()};
  g.lambda4 = {cfg.lambda4()};
  g.lambda5 = {cfg.lambda5()};
  return g;
}

std::vector<std::array<double, 5>> GridSpec::enumerate() const {
  if (lambda1.empty() || lambda2.empty() || lambda3.empty() || lambda4.empty() ||
      lambda5.empty())
    throw std::invalid_argument("GridSpec: every lambda needs at least one candidate");
  std::vector<std::array<double, 5>> points;
  for (double l1 : lambda1)
    for (double l2 : lambda2)
      for (double l3 : lambda3)
        for (double l4 : lambda4)
          for (double l5 : lambda5) {
            if (l4 > l2 || l5 > l3) continue;
            points.push_back({l1, l2, l3, l4, l5});
          }
  if (points.empty())
    throw std::invalid_argument(
        "GridSpec: no grid point satisfies lambda4 <= lambda2 and lambda5 <= lambda3");
  return points;
}

namespace {

std::vector<double> lambda_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return {j.get<double>()};
}

// Lexicographic comparison over (lambda1..lambda5); used for the sparser-model
// tie rule.
bool lambda_tuple_greater(const std::array<double, 5>& a, const std::array<double, 5>& b) {
  for (std::size_t k = 0; k < 5; ++k) {
    if (a[k] != b[k]) return a[k] > b[k];
  }
  return false;
}

}  // namespace

void from_json(const nlohmann::json& j, GridSpec& grid) {
  grid.lambda1 = lambda_list(j.at("lambda1"));
  grid.lambda2 = lambda_list(j.at("lambda2"));
  grid.lambda3 = lambda_list(j.at("lambda3"));
  grid.lambda4 = j.contains("lambda4") ? lambda_list(j.at("lambda4")) : grid.lambda2;
  grid.lambda5 = j.contains("lambda5") ? lambda_list(j.at("lambda5")) : grid.lambda3;
}

GridSelection grid_select(const SymmetricMatrix& s, int n, const GridSpec& grid,
                          const std::set<int>& discriminated,
                          const AdmmConfig& admm, const BicConfig& bic_cfg) {
  const auto points = grid.enumerate();
  const int p = static_cast<int>(s.dim());

  std::optional<GridSelection> best;
  std::array<double, 5> best_tuple{};
  std::exception_ptr last_error;

  for (const auto& pt : points) {
    PenaltyConfig cfg(pt[0], pt[1], pt[2], pt[3], pt[4], discriminated);
    if (grid.region_policy != RegionPolicy::Ignore && p >= 2) {
      const RegionVerdict verdict = classify_lambda_region(cfg, p);
      if (verdict.classification != LambdaRegion::Interior) {
        if (grid.region_policy == RegionPolicy::Reject) continue;
        std::cerr << "warning: grid point (" << pt[0] << ", " << pt[1] << ", " << pt[2] << ", "
                  << pt[3] << ", " << pt[4] << ") lies outside the interior lambda region\n";
      }
    }
    try {
      SolveResult fit = solve(s, cfg, admm);
      const double value = bic(fit, s, n, bic_cfg);
      const bool better =
          !best || value < best->bic_value ||
          (value == best->bic_value && lambda_tuple_greater(pt, best_tuple));
      if (better) {
        best = GridSelection{std::move(cfg), std::move(fit), value};
        best_tuple = pt;
      }
    } catch (const std::exception& e) {
      std::cerr << "warning: grid point solve failed (" << e.what() << "); skipping\n";
      last_error = std::current_exception();
    }
  }

  if (!best) {
    if (last_error) std::rethrow_exception(last_error);
    throw std::runtime_error("grid_select: empty grid");
  }
  return std::move(*best);
}

}  // namespace dhgl
