#pragma once

#include "dhgl/selection.hpp"

#include <set>
#include <vector>

namespace dhgl {

struct EmptyPath : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct HubExtractionConfig {
  double t = 0.005;  // edge tolerance: |theta_ij| > t is an edge
  int r = 1;         // minimum degree for a hub

  void validate(Eigen::Index p) const;
};

/// Nodes with at least r neighbors, where j' neighbors j iff |theta_jj'| > t.
std::set<int> extract_hubs(const SymmetricMatrix& theta, const HubExtractionConfig& cfg);

/// Graphical-lasso baseline on the dedicated V == 0 solver mode.
SolveResult run_gl(const SymmetricMatrix& s, double lambda, const AdmmConfig& admm = {});

/// Screening parameters for the no-known-hubs workflow: walk the GL path
/// from large lambda down until it proposes a hub the hub-penalty fit missed,
/// capped at max(|H_hgl| + a, b |H_hgl|) total hubs.
struct ScreeningConfig {
  int a = 2;
  double b = 1.1;
  std::vector<double> lambda_path;  // strictly descending

  void validate() const;
};

/// 20 logarithmically spaced values from max |S_ij| (i != j) down to 1% of
/// it. Degenerate inputs with no off-diagonal mass yield an empty path.
std::vector<double> default_lambda_path(const SymmetricMatrix& s, int points = 20);

/// Evenly spaced lambda5 candidates on [0.5, 1].
std::vector<double> default_lambda5_grid(int points = 6);

/// lambda4 in {0.25, 0.5, 0.75} lambda2 crossed with lambda5 in
/// {0.1, 0.25, 0.5} lambda3, holding lambda1..lambda3 fixed.
GridSpec default_grid45(const PenaltyConfig& hgl_params);

enum class Provenance { HglOnly, Dhgl };

struct WorkflowResult {
  SolveResult estimate;         // the estimate the workflow settled on
  std::set<int> hubs;           // estimated hub set reported by the workflow
  std::set<int> discriminated;  // D actually used (empty for HglOnly)
  Provenance provenance = Provenance::HglOnly;
  PenaltyConfig penalty;        // parameters behind `estimate`

  SolveResult hgl_estimate;     // step-1 baseline, kept for comparisons
  std::set<int> hgl_hubs;
};

/// Known-hubs workflow: fit with the hub penalty, discriminate the known hubs
/// the fit missed, refit with (lambda4, lambda5) chosen by BIC over grid45,
/// and report the union of both hub sets. When every known hub was already
/// found the baseline fit is returned unchanged.
WorkflowResult algorithm1_known_hubs(const Matrix& x, const std::set<int>& known_hubs,
                                     const PenaltyConfig& hgl_params, const GridSpec& grid45,
                                     const HubExtractionConfig& extraction,
                                     const AdmmConfig& admm, const BicConfig& bic_cfg);

/// Screening workflow: derive candidate hubs from a descending GL path, put
/// the new ones in D, keep lambda4 = lambda2 and choose lambda5 by BIC. Falls
/// back to the baseline fit when no path point qualifies.
WorkflowResult algorithm2_screening(const Matrix& x, const PenaltyConfig& hgl_params,
                                    const ScreeningConfig& screening,
                                    const std::vector<double>& lambda5_grid,
                                    const HubExtractionConfig& extraction,
                                    const AdmmConfig& admm, const BicConfig& bic_cfg);

}  // namespace dhgl
