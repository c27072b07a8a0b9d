#include "dhgl/experiment.hpp"
#include "dhgl/matrix_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitFailureRate = 3;

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

json load_config(const CommonArgs& args) {
  json j = dhgl::load_json_file(args.config_path);
  if (!args.out.empty()) j["out"] = args.out;
  if (args.seed) j["seed"] = *args.seed;
  if (args.jobs > 1) j["jobs"] = args.jobs;
  return j;
}

int cmd_generate(const CommonArgs& args) {
  const json j = load_config(args);
  dhgl::NetworkSpec spec;
  spec.p = j.at("network").at("p").get<int>();
  spec.hub_count = j.at("network").at("hub_count").get<int>();
  spec.background_edge_prob = j.at("network").value("background_edge_prob", spec.background_edge_prob);
  spec.hub_edge_prob = j.at("network").value("hub_edge_prob", spec.hub_edge_prob);
  spec.edge_low = j.at("network").value("edge_low", spec.edge_low);
  spec.edge_high = j.at("network").value("edge_high", spec.edge_high);
  spec.diagonal_boost = j.at("network").value("diagonal_boost", spec.diagonal_boost);
  const std::uint64_t root = j.value("seed", 0ULL);
  const int n = j.at("n").get<int>();
  const int replications = j.at("replications").get<int>();
  const std::string out_dir = j.value("out", ".");

  spec.seed = dhgl::derive_seed(root, 0);
  const dhgl::GroundTruth truth = dhgl::generate_truth(spec);

  fs::create_directories(out_dir);
  dhgl::save_matrix_csv(truth.theta.mat(), (fs::path(out_dir) / "truth.csv").string());

  json sidecar;
  sidecar["hubs"] = truth.hubs;
  sidecar["seed"] = root;
  sidecar["n"] = n;
  sidecar["replications"] = replications;
  sidecar["network"] = {{"p", spec.p},
                        {"hub_count", spec.hub_count},
                        {"background_edge_prob", spec.background_edge_prob},
                        {"hub_edge_prob", spec.hub_edge_prob},
                        {"edge_low", spec.edge_low},
                        {"edge_high", spec.edge_high},
                        {"diagonal_boost", spec.diagonal_boost}};
  std::ofstream side(fs::path(out_dir) / "truth.json");
  side << sidecar.dump(2) << '\n';

  for (int rep = 0; rep < replications; ++rep) {
    const dhgl::Sample sample =
        dhgl::sample_gaussian(truth, n, dhgl::replication_sample_seed(root, rep));
    char name[64];
    std::snprintf(name, sizeof(name), "sample_%03d.csv", rep);
    dhgl::save_matrix_csv(sample.x, (fs::path(out_dir) / name).string());
  }
  std::cout << "wrote truth + " << replications << " samples to " << out_dir << '\n';
  return kExitOk;
}

dhgl::AdmmConfig admm_from(const json& j) {
  dhgl::AdmmConfig cfg;
  if (j.contains("admm")) {
    cfg.rho = j.at("admm").value("rho", cfg.rho);
    cfg.tau = j.at("admm").value("tau", cfg.tau);
    cfg.max_iterations = j.at("admm").value("max_iterations", cfg.max_iterations);
  }
  cfg.validate();
  return cfg;
}

dhgl::HubExtractionConfig extraction_from(const json& j, Eigen::Index p) {
  dhgl::HubExtractionConfig cfg;
  if (j.contains("extraction")) {
    cfg.t = j.at("extraction").value("t", cfg.t);
    cfg.r = j.at("extraction").value("r", 0);
  }
  if (cfg.r <= 0) cfg.r = std::max<int>(1, static_cast<int>(p) / 5);
  return cfg;
}

int cmd_estimate(const std::string& method_name, const std::string& data_path,
                 const std::string& cov_path, const std::string& params_path,
                 const std::string& out_path) {
  const dhgl::Method method = dhgl::parse_method(method_name);
  const json params = params_path.empty() ? json::object() : dhgl::load_json_file(params_path);

  dhgl::Matrix x;
  dhgl::SymmetricMatrix s;
  const bool have_data = !data_path.empty();
  if (have_data) {
    x = dhgl::load_matrix_csv(data_path);
    s = dhgl::empirical_covariance(x);
  } else if (!cov_path.empty()) {
    s = dhgl::SymmetricMatrix::require_symmetric(dhgl::load_matrix_csv(cov_path), 1e-9);
  } else {
    throw std::invalid_argument("estimate: provide --data or --cov");
  }

  const dhgl::AdmmConfig admm = admm_from(params);
  const dhgl::HubExtractionConfig extraction = extraction_from(params, s.dim());

  dhgl::SolveResult fit;
  std::set<int> hubs;
  std::set<int> discriminated;
  std::string provenance = "direct";

  switch (method) {
    case dhgl::Method::Gl: {
      fit = dhgl::run_gl(s, params.at("lambda").get<double>(), admm);
      hubs = dhgl::extract_hubs(fit.theta_hat, extraction);
      break;
    }
    case dhgl::Method::Hgl: {
      const dhgl::PenaltyConfig cfg = dhgl::PenaltyConfig::hub(
          params.at("lambda1").get<double>(), params.at("lambda2").get<double>(),
          params.at("lambda3").get<double>());
      fit = dhgl::solve(s, cfg, admm);
      hubs = dhgl::extract_hubs(fit.theta_hat, extraction);
      break;
    }
    case dhgl::Method::Dhgl: {
      const dhgl::PenaltyConfig cfg = params.get<dhgl::PenaltyConfig>();
      fit = dhgl::solve(s, cfg, admm);
      hubs = dhgl::extract_hubs(fit.theta_hat, extraction);
      discriminated = cfg.discriminated();
      break;
    }
    case dhgl::Method::Algorithm1: {
      if (!have_data)
        throw std::invalid_argument("estimate: algorithm1 needs --data (not --cov)");
      const dhgl::PenaltyConfig hgl = dhgl::PenaltyConfig::hub(
          params.at("hgl").at("lambda1").get<double>(),
          params.at("hgl").at("lambda2").get<double>(),
          params.at("hgl").at("lambda3").get<double>());
      const std::set<int> known = params.at("known").get<std::set<int>>();
      dhgl::GridSpec grid = dhgl::default_grid45(hgl);
      if (params.contains("lambda4_grid"))
        grid.lambda4 = params.at("lambda4_grid").get<std::vector<double>>();
      if (params.contains("lambda5_grid"))
        grid.lambda5 = params.at("lambda5_grid").get<std::vector<double>>();
      dhgl::BicConfig bic;
      bic.c = params.value("bic_c", 0.2);
      dhgl::WorkflowResult wf = dhgl::algorithm1_known_hubs(
          x, known, hgl, grid, extraction, admm, bic);
      fit = wf.estimate;
      hubs = wf.hubs;
      discriminated = wf.discriminated;
      provenance = wf.provenance == dhgl::Provenance::Dhgl ? "dhgl" : "hgl-only";
      break;
    }
    case dhgl::Method::Algorithm2: {
      if (!have_data)
        throw std::invalid_argument("estimate: algorithm2 needs --data (not --cov)");
      const dhgl::PenaltyConfig hgl = dhgl::PenaltyConfig::hub(
          params.at("hgl").at("lambda1").get<double>(),
          params.at("hgl").at("lambda2").get<double>(),
          params.at("hgl").at("lambda3").get<double>());
      dhgl::ScreeningConfig screening;
      screening.a = params.value("a", 2);
      screening.b = params.value("b", 1.1);
      if (params.contains("lambda_path"))
        screening.lambda_path = params.at("lambda_path").get<std::vector<double>>();
      else
        screening.lambda_path = dhgl::default_lambda_path(s, params.value("path_points", 20));
      const std::vector<double> l5 = params.contains("lambda5_grid")
                                         ? params.at("lambda5_grid").get<std::vector<double>>()
                                         : dhgl::default_lambda5_grid();
      dhgl::BicConfig bic;
      bic.c = params.value("bic_c", 0.1);
      dhgl::WorkflowResult wf = dhgl::algorithm2_screening(
          x, hgl, screening, l5, extraction, admm, bic);
      fit = wf.estimate;
      hubs = wf.hubs;
      discriminated = wf.discriminated;
      provenance = wf.provenance == dhgl::Provenance::Dhgl ? "dhgl" : "hgl-only";
      break;
    }
  }

  json out = dhgl::solve_result_to_json(fit);
  out["method"] = method_name;
  out["hubs"] = hubs;
  out["discriminated"] = discriminated;
  out["provenance"] = provenance;
  if (out_path.empty() || out_path == "-") {
    std::cout << out.dump(2) << '\n';
  } else {
    if (fs::path(out_path).has_parent_path())
      fs::create_directories(fs::path(out_path).parent_path());
    std::ofstream f(out_path);
    f << out.dump(2) << '\n';
    std::cout << "wrote " << out_path << '\n';
  }
  return fit.converged ? kExitOk : kExitNotConverged;
}

int cmd_experiment(const CommonArgs& args) {
  const dhgl::ExperimentConfig cfg = dhgl::parse_experiment_config(load_config(args));
  const dhgl::RunArtifact artifact = dhgl::run_experiment(cfg);
  const double failed = dhgl::write_artifact(artifact, cfg);
  std::cout << "scenario '" << cfg.scenario << "': " << artifact.rows.size()
            << " rows written to " << cfg.out_dir;
  if (failed > 0) std::cout << " (" << failed * 100.0 << "% failed)";
  std::cout << '\n';
  return failed > 0.1 ? kExitFailureRate : kExitOk;
}

int cmd_bench(const CommonArgs& args) {
  const json j = load_config(args);
  const dhgl::BenchConfig cfg = dhgl::parse_bench_config(j);
  const std::vector<dhgl::BenchRow> rows = dhgl::run_bench(cfg);
  const std::string csv = dhgl::bench_csv(rows);
  const std::string out_dir = j.value("out", ".");
  fs::create_directories(out_dir);
  std::ofstream f(fs::path(out_dir) / "bench.csv");
  f << csv;
  std::cout << csv;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hub-structured sparse precision-matrix estimation toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string method, data_path, cov_path, params_path, out_path;

  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic truth and samples");
  generate->add_option("--config", common.config_path, "JSON config")->required();
  generate->add_option("--out", common.out, "output directory");
  generate->add_option("--seed", common.seed, "root seed override");

  CLI::App* estimate = app.add_subcommand("estimate", "Fit one method to one dataset");
  estimate->add_option("--method", method, "gl|hgl|dhgl|algorithm1|algorithm2")->required();
  estimate->add_option("--data", data_path, "n x p data matrix CSV");
  estimate->add_option("--cov", cov_path, "p x p covariance CSV");
  estimate->add_option("--params", params_path, "method parameters JSON");
  estimate->add_option("--out", out_path, "result JSON path ('-' for stdout)");

  CLI::App* experiment = app.add_subcommand("experiment", "Run a replicated comparison");
  experiment->add_option("--config", common.config_path, "JSON config")->required();
  experiment->add_option("--out", common.out, "output directory");
  experiment->add_option("--seed", common.seed, "root seed override");
  experiment->add_option("--jobs", common.jobs, "parallel replications");

  CLI::App* bench = app.add_subcommand("bench", "Time the solver across sizes");
  bench->add_option("--config", common.config_path, "JSON config")->required();
  bench->add_option("--out", common.out, "output directory");
  bench->add_option("--seed", common.seed, "root seed override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(common);
    if (estimate->parsed())
      return cmd_estimate(method, data_path, cov_path, params_path, out_path);
    if (experiment->parsed()) return cmd_experiment(common);
    if (bench->parsed()) return cmd_bench(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
