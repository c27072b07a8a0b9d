#include "dhgl/workflows.hpp"

#include "dhgl/datagen.hpp"

#include <doctest.h>

#include <random>

using namespace dhgl;

namespace {

Sample make_instance(int p, int hubs, int n, std::uint64_t seed) {
  NetworkSpec spec;
  spec.p = p;
  spec.hub_count = hubs;
  spec.seed = seed;
  const GroundTruth truth = generate_truth(spec);
  return sample_gaussian(truth, n, derive_seed(seed, 1));
}

}  // namespace

TEST_CASE("extract_hubs degree rule") {
  SUBCASE("identity has no edges") {
    HubExtractionConfig cfg;
    cfg.r = 1;
    CHECK(extract_hubs(SymmetricMatrix::identity(4), cfg).empty());
  }
  SUBCASE("star node with degree exactly r") {
    SymmetricMatrix theta = SymmetricMatrix::identity(4);
    theta.set(0, 1, 0.1);
    theta.set(0, 2, 0.1);
    theta.set(0, 3, 0.1);
    HubExtractionConfig cfg;
    cfg.t = 0.005;
    cfg.r = 3;
    CHECK(extract_hubs(theta, cfg) == std::set<int>{0});
    cfg.t = 0.2;  // tolerance above every entry: no edges at all
    CHECK(extract_hubs(theta, cfg).empty());
  }
  SUBCASE("config validation") {
    HubExtractionConfig cfg;
    cfg.r = 4;  // > p - 1
    CHECK_THROWS_AS(extract_hubs(SymmetricMatrix::identity(4), cfg), std::invalid_argument);
    cfg.r = 1;
    cfg.t = 0.0;
    CHECK_THROWS_AS(extract_hubs(SymmetricMatrix::identity(4), cfg), std::invalid_argument);
  }
}

TEST_CASE("run_gl limiting behavior") {
  Matrix s_raw(3, 3);
  s_raw << 2.0, 0.4, 0.1, 0.4, 1.0, -0.2, 0.1, -0.2, 0.5;
  const SymmetricMatrix s = SymmetricMatrix::require_symmetric(s_raw);
  AdmmConfig cfg;
  cfg.tau = 1e-12;
  cfg.max_iterations = 5000;

  SUBCASE("huge lambda gives the diagonal MLE") {
    const SolveResult fit = run_gl(s, 100.0, cfg);
    for (int i = 0; i < 3; ++i)
      CHECK(fit.theta_hat(i, i) == doctest::Approx(1.0 / s(i, i)).epsilon(1e-3));
    CHECK(l1_offdiag(fit.theta_hat.mat()) <= 1e-6);
  }
  SUBCASE("lambda zero inverts S") {
    const SolveResult fit = run_gl(s, 0.0, cfg);
    CHECK((fit.theta_hat.mat() - s.mat().inverse()).norm() <= 1e-4);
  }
}

TEST_CASE("default lambda path and lambda5 grid") {
  SymmetricMatrix s = SymmetricMatrix::identity(3);
  s.set(0, 1, 0.8);
  s.set(1, 2, -0.2);
  const std::vector<double> path = default_lambda_path(s);
  REQUIRE(path.size() == 20);
  CHECK(path.front() == doctest::Approx(0.8));
  CHECK(path.back() == doctest::Approx(0.008));
  for (std::size_t i = 1; i < path.size(); ++i) CHECK(path[i] < path[i - 1]);

  CHECK(default_lambda_path(SymmetricMatrix::identity(3)).empty());

  const std::vector<double> grid = default_lambda5_grid();
  REQUIRE(grid.size() == 6);
  CHECK(grid.front() == doctest::Approx(0.5));
  CHECK(grid.back() == doctest::Approx(1.0));
}

TEST_CASE("ScreeningConfig validation") {
  ScreeningConfig cfg;
  cfg.lambda_path = {1.0, 0.5};
  CHECK_NOTHROW(cfg.validate());
  cfg.a = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.a = 2;
  cfg.b = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.b = 1.1;
  cfg.lambda_path = {};
  CHECK_THROWS_AS(cfg.validate(), EmptyPath);
  cfg.lambda_path = {0.5, 0.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("algorithm1 falls back to the baseline when nothing is discriminated") {
  const Sample sample = make_instance(20, 2, 80, 101);
  const PenaltyConfig hgl_params = PenaltyConfig::hub(0.3, 0.2, 1.0);
  HubExtractionConfig extraction;
  extraction.t = 0.005;
  extraction.r = 4;
  const AdmmConfig admm;
  const BicConfig bic_cfg;

  SUBCASE("empty known set") {
    const WorkflowResult wf = algorithm1_known_hubs(sample.x, {}, hgl_params,
                                                    default_grid45(hgl_params), extraction,
                                                    admm, bic_cfg);
    CHECK(wf.provenance == Provenance::HglOnly);
    CHECK(wf.discriminated.empty());
    CHECK(wf.hubs == wf.hgl_hubs);
    CHECK((wf.estimate.theta_hat.mat() - wf.hgl_estimate.theta_hat.mat()).norm() == 0.0);
  }
  SUBCASE("known hubs already recovered") {
    const SymmetricMatrix s = empirical_covariance(sample.x);
    const SolveResult baseline = solve(s, hgl_params, admm);
    const std::set<int> found = extract_hubs(baseline.theta_hat, extraction);
    if (!found.empty()) {
      const std::set<int> known{*found.begin()};
      const WorkflowResult wf = algorithm1_known_hubs(sample.x, known, hgl_params,
                                                      default_grid45(hgl_params), extraction,
                                                      admm, bic_cfg);
      CHECK(wf.provenance == Provenance::HglOnly);
      CHECK((wf.estimate.theta_hat.mat() - baseline.theta_hat.mat()).norm() == 0.0);
    }
  }
}

TEST_CASE("algorithm1 discriminates missed known hubs and keeps the union") {
  const PenaltyConfig hgl_params = PenaltyConfig::hub(0.4, 0.4, 1.5);
  HubExtractionConfig extraction;
  extraction.t = 0.005;
  extraction.r = 6;
  const AdmmConfig admm;
  const BicConfig bic_cfg;

  bool exercised = false;
  for (std::uint64_t seed = 0; seed < 40 && !exercised; ++seed) {
    const Sample sample = make_instance(24, 3, 30, 1000 + seed);
    const SymmetricMatrix s = empirical_covariance(sample.x);
    const SolveResult baseline = solve(s, hgl_params, admm);
    const std::set<int> found = extract_hubs(baseline.theta_hat, extraction);

    // Look for a true hub the baseline missed.
    std::set<int> missed;
    for (int h : sample.truth.hubs)
      if (!found.count(h)) missed.insert(h);
    if (missed.empty()) continue;

    const std::set<int> known{*missed.begin()};
    const WorkflowResult wf = algorithm1_known_hubs(sample.x, known, hgl_params,
                                                    default_grid45(hgl_params), extraction,
                                                    admm, bic_cfg);
    CHECK(wf.provenance == Provenance::Dhgl);
    CHECK(wf.discriminated == known);
    for (int h : wf.hgl_hubs) CHECK(wf.hubs.count(h) == 1);
    CHECK(wf.penalty.lambda1() == hgl_params.lambda1());
    CHECK(wf.penalty.lambda2() == hgl_params.lambda2());
    CHECK(wf.penalty.lambda3() == hgl_params.lambda3());
    CHECK(wf.penalty.lambda4() <= wf.penalty.lambda2());
    exercised = true;
  }
  CHECK(exercised);
}

TEST_CASE("algorithm2 falls back when the path never qualifies") {
  const Sample sample = make_instance(18, 2, 60, 202);
  const PenaltyConfig hgl_params = PenaltyConfig::hub(0.3, 0.25, 1.0);
  HubExtractionConfig extraction;
  extraction.t = 0.005;
  extraction.r = 4;
  ScreeningConfig screening;
  screening.lambda_path = {1e6};  // GL estimate is diagonal: no hubs anywhere
  const WorkflowResult wf = algorithm2_screening(sample.x, hgl_params, screening,
                                                 default_lambda5_grid(), extraction,
                                                 AdmmConfig{}, BicConfig{});
  CHECK(wf.provenance == Provenance::HglOnly);
  CHECK(wf.discriminated.empty());
}

TEST_CASE("algorithm2 respects the screening invariants when it runs") {
  const PenaltyConfig hgl_params = PenaltyConfig::hub(0.4, 0.3, 1.5);
  HubExtractionConfig extraction;
  extraction.t = 0.005;
  extraction.r = 5;
  BicConfig bic_cfg;
  bic_cfg.c = 0.1;

  int dhgl_runs = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Sample sample = make_instance(20, 3, 30, 3000 + seed);
    const SymmetricMatrix s = empirical_covariance(sample.x);
    ScreeningConfig screening;
    screening.lambda_path = default_lambda_path(s);
    if (screening.lambda_path.empty()) continue;
    const WorkflowResult wf = algorithm2_screening(sample.x, hgl_params, screening,
                                                   default_lambda5_grid(), extraction,
                                                   AdmmConfig{}, bic_cfg);
    if (wf.provenance != Provenance::Dhgl) continue;
    ++dhgl_runs;
    // D never overlaps the baseline hubs and the pooled count stays capped.
    for (int d : wf.discriminated) CHECK(wf.hgl_hubs.count(d) == 0);
    std::set<int> pooled = wf.hgl_hubs;
    pooled.insert(wf.discriminated.begin(), wf.discriminated.end());
    const double cap = std::max(static_cast<double>(wf.hgl_hubs.size()) + screening.a,
                                screening.b * static_cast<double>(wf.hgl_hubs.size()));
    CHECK(static_cast<double>(pooled.size()) <= cap);
    CHECK(wf.penalty.lambda4() == hgl_params.lambda2());
  }
  CHECK(dhgl_runs > 0);
}

TEST_CASE("algorithm2 with a single matched lambda5 candidate equals the baseline") {
  const PenaltyConfig hgl_params = PenaltyConfig::hub(0.4, 0.3, 1.5);
  HubExtractionConfig extraction;
  extraction.t = 0.005;
  extraction.r = 5;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Sample sample = make_instance(20, 3, 30, 3000 + seed);
    const SymmetricMatrix s = empirical_covariance(sample.x);
    ScreeningConfig screening;
    screening.lambda_path = default_lambda_path(s);
    if (screening.lambda_path.empty()) continue;
    const WorkflowResult wf = algorithm2_screening(
        sample.x, hgl_params, screening, std::vector<double>{hgl_params.lambda3()},
        extraction, AdmmConfig{}, BicConfig{});
    // lambda4 = lambda2 and lambda5 = lambda3 make the penalty blind to D.
    CHECK((wf.estimate.theta_hat.mat() - wf.hgl_estimate.theta_hat.mat()).norm() <= 1e-8);
  }
}

TEST_CASE("gl hub count never increases with lambda") {
  const Sample sample = make_instance(20, 2, 120, 404);
  const SymmetricMatrix s = empirical_covariance(sample.x);
  HubExtractionConfig extraction;
  extraction.t = 0.005;
  extraction.r = 4;
  const std::vector<double> path = default_lambda_path(s, 10);
  REQUIRE(path.size() == 10);
  std::size_t previous = 0;  // path is descending, so counts may only grow
  for (double lambda : path) {
    const std::size_t count = extract_hubs(run_gl(s, lambda).theta_hat, extraction).size();
    CHECK(count >= previous);
    previous = count;
  }
}
