#pragma once

#include "dhgl/admm.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <set>
#include <vector>

namespace dhgl {

struct BicConfig {
  double c = 0.2;                 // hub-edge discount, in (0, 1)
  double count_tolerance = 1e-6;  // |entry| above this counts as nonzero

  void validate() const;
};

/// BIC-type quantity
///   -n log det Theta + n trace(S Theta) + log(n) |Z| + log(n) (nu + c (|V| - nu))
/// where |Z| counts upper-triangle off-diagonal nonzeros of Z, |V| counts all
/// off-diagonal nonzeros of V, and nu counts columns of V with more than one
/// nonzero entry (diagonal included).
double bic(const SolveResult& fit, const SymmetricMatrix& s, int n, const BicConfig& cfg = {});

enum class RegionPolicy { Ignore, Warn, Reject };

/// Candidate values per tuning parameter; the cross product is the grid.
/// Combinations violating lambda4 <= lambda2 or lambda5 <= lambda3 are
/// dropped during enumeration.
struct GridSpec {
  std::vector<double> lambda1, lambda2, lambda3, lambda4, lambda5;
  RegionPolicy region_policy = RegionPolicy::Warn;

  static GridSpec single(const PenaltyConfig& cfg);
  std::vector<std::array<double, 5>> enumerate() const;
};

void from_json(const nlohmann::json& j, GridSpec& grid);

struct GridSelection {
  PenaltyConfig penalty;
  SolveResult fit;
  double bic_value = 0.0;
};

/// Solves every grid point and returns the BIC minimizer. Ties go to the
/// larger penalty (sparser model), comparing (lambda1..lambda5)
/// lexicographically. Points whose solve throws are skipped with a warning;
/// if every point fails the last error propagates.
GridSelection grid_select(const SymmetricMatrix& s, int n, const GridSpec& grid,
                          const std::set<int>& discriminated,
                          const AdmmConfig& admm, const BicConfig& bic_cfg);

}  // namespace dhgl
