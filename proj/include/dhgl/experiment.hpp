#pragma once

#include "dhgl/datagen.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dhgl {

enum class Method { Gl, Hgl, Dhgl, Algorithm1, Algorithm2 };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// One synthetic-experiment scenario: a generator spec, the methods to
/// compare, and their tuning parameters. Parsed from the JSON config format
/// documented in the README.
struct ExperimentConfig {
  std::string scenario = "experiment";
  NetworkSpec network;
  int n = 0;
  int replications = 1;
  std::uint64_t seed = 0;
  std::vector<Method> methods;
  HubExtractionConfig extraction;
  AdmmConfig admm;
  BicConfig bic;
  int jobs = 1;
  std::string out_dir = ".";

  // gl
  double gl_lambda = 0.0;
  // hgl: lambda2 may carry several candidates; it is then selected by BIC
  // per replication and the winner feeds the workflows too.
  double hgl_lambda1 = 0.0, hgl_lambda3 = 0.0;
  std::vector<double> hgl_lambda2{0.0};
  // dhgl (standalone)
  std::optional<PenaltyConfig> dhgl;
  // algorithm1
  int known_hub_count = 2;
  std::optional<std::set<int>> known_hubs_fixed;  // overrides the seeded draw
  std::optional<GridSpec> grid45;                 // defaults to default_grid45
  // algorithm2
  ScreeningConfig screening;                      // lambda_path may stay empty
  int path_points = 20;
  std::vector<double> lambda5_grid;               // defaults to default_lambda5_grid()
  BicConfig algorithm2_bic;                       // defaults to c = 0.1
  // score hub-node measures excluding the known hubs of each replication
  bool exclude_known_from_hub_measures = true;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json load_json_file(const std::string& path);

struct RunRecord {
  int replication = 0;
  Method method = Method::Gl;
  bool ok = false;
  std::string error;
  MetricsRecord metrics;
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

struct RunArtifact {
  std::vector<RunRecord> rows;  // replications x methods, replication-major
  GroundTruth truth;
};

std::uint64_t replication_sample_seed(std::uint64_t root, int replication);
std::uint64_t replication_known_seed(std::uint64_t root, int replication);

/// Runs every (replication, method) cell; failures become error rows instead
/// of aborting the run. Replications execute concurrently up to cfg.jobs with
/// per-replication seed streams, so the output is independent of scheduling.
RunArtifact run_experiment(const ExperimentConfig& cfg);

/// Writes metrics.csv, runs.csv, aggregate.csv (and errors.csv when needed)
/// under cfg.out_dir. Returns the failed-row fraction.
double write_artifact(const RunArtifact& artifact, const ExperimentConfig& cfg);

struct BenchConfig {
  std::vector<int> sizes;
  int replications = 5;
  bool proportional = false;  // scale n, r, hub_count with p
  NetworkSpec base;
  int n = 50;
  int r = 30;
  double lambda1 = 0.4, lambda2 = 0.4, lambda3 = 1.0;
  double lambda4_factor = 0.5;  // lambda4 = factor * lambda2
  double lambda5 = 0.1;
  int known_hub_count = 2;
  std::uint64_t seed = 0;
  AdmmConfig admm;
  HubExtractionConfig extraction;
};

BenchConfig parse_bench_config(const nlohmann::json& j);

struct BenchRow {
  int p = 0;
  std::string method;
  double mean_run_time = 0.0;
  double mean_iterations = 0.0;
  double time_per_iteration = 0.0;  // mean time / mean iterations
  int runs = 0;
};

/// Times the hub-penalty solver and its discriminated refit across problem
/// sizes, mirroring the run time / iteration / time-per-iteration layout.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace dhgl
