#include "dhgl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <thread>

namespace dhgl {

namespace fs = std::filesystem;

std::string method_name(Method m) {
  switch (m) {
    case Method::Gl: return "gl";
    case Method::Hgl: return "hgl";
    case Method::Dhgl: return "dhgl";
    case Method::Algorithm1: return "algorithm1";
    case Method::Algorithm2: return "algorithm2";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "gl") return Method::Gl;
  if (name == "hgl") return Method::Hgl;
  if (name == "dhgl") return Method::Dhgl;
  if (name == "algorithm1") return Method::Algorithm1;
  if (name == "algorithm2") return Method::Algorithm2;
  throw std::invalid_argument("unknown method '" + name + "'");
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j;
}

namespace {

std::vector<double> number_or_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return {j.get<double>()};
}

NetworkSpec parse_network(const nlohmann::json& j) {
  NetworkSpec spec;
  spec.p = j.at("p").get<int>();
  spec.hub_count = j.at("hub_count").get<int>();
  spec.background_edge_prob = j.value("background_edge_prob", spec.background_edge_prob);
  spec.hub_edge_prob = j.value("hub_edge_prob", spec.hub_edge_prob);
  spec.edge_low = j.value("edge_low", spec.edge_low);
  spec.edge_high = j.value("edge_high", spec.edge_high);
  spec.diagonal_boost = j.value("diagonal_boost", spec.diagonal_boost);
  return spec;
}

AdmmConfig parse_admm(const nlohmann::json& j) {
  AdmmConfig cfg;
  cfg.rho = j.value("rho", cfg.rho);
  cfg.tau = j.value("tau", cfg.tau);
  cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
  cfg.validate();
  return cfg;
}

BicConfig parse_bic(const nlohmann::json& j) {
  BicConfig cfg;
  cfg.c = j.value("c", cfg.c);
  cfg.count_tolerance = j.value("count_tolerance", cfg.count_tolerance);
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.scenario = j.value("scenario", cfg.scenario);
  cfg.network = parse_network(j.at("network"));
  cfg.n = j.at("n").get<int>();
  cfg.replications = j.at("replications").get<int>();
  if (cfg.replications < 1)
    throw std::invalid_argument("config: replications must be >= 1");
  cfg.seed = j.value("seed", 0ULL);
  cfg.network.seed = cfg.seed;  // truth stream derives from the root seed

  for (const auto& name : j.at("methods")) cfg.methods.push_back(parse_method(name));
  if (cfg.methods.empty()) throw std::invalid_argument("config: methods list is empty");

  const auto& ex = j.at("extraction");
  cfg.extraction.t = ex.value("t", cfg.extraction.t);
  cfg.extraction.r = ex.at("r").get<int>();

  if (j.contains("admm")) cfg.admm = parse_admm(j.at("admm"));
  if (j.contains("bic")) cfg.bic = parse_bic(j.at("bic"));
  cfg.jobs = j.value("jobs", 1);
  cfg.out_dir = j.value("out", cfg.out_dir);

  const bool needs_hgl =
      std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) {
        return m == Method::Hgl || m == Method::Algorithm1 || m == Method::Algorithm2;
      });
  if (needs_hgl) {
    const auto& h = j.at("hgl");
    cfg.hgl_lambda1 = h.at("lambda1").get<double>();
    cfg.hgl_lambda2 = number_or_list(h.at("lambda2"));
    cfg.hgl_lambda3 = h.at("lambda3").get<double>();
  }
  if (std::count(cfg.methods.begin(), cfg.methods.end(), Method::Gl) > 0)
    cfg.gl_lambda = j.at("gl").at("lambda").get<double>();
  if (std::count(cfg.methods.begin(), cfg.methods.end(), Method::Dhgl) > 0)
    cfg.dhgl = j.at("dhgl").get<PenaltyConfig>();

  if (std::count(cfg.methods.begin(), cfg.methods.end(), Method::Algorithm1) > 0) {
    const auto& a1 = j.at("algorithm1");
    if (a1.contains("known")) {
      cfg.known_hubs_fixed = a1.at("known").get<std::set<int>>();
    } else {
      cfg.known_hub_count = a1.at("known_hubs").get<int>();
    }
    if (a1.contains("lambda4_grid") != a1.contains("lambda5_grid"))
      throw std::invalid_argument(
          "config: algorithm1 needs both lambda4_grid and lambda5_grid (or neither)");
    if (a1.contains("lambda4_grid")) {
      // lambda1..lambda3 are placeholders; the workflow pins them to the
      // resolved HGL parameters of each replication.
      GridSpec g;
      g.lambda1 = {cfg.hgl_lambda1};
      g.lambda2 = cfg.hgl_lambda2;
      g.lambda3 = {cfg.hgl_lambda3};
      g.lambda4 = number_or_list(a1.at("lambda4_grid"));
      g.lambda5 = number_or_list(a1.at("lambda5_grid"));
      cfg.grid45 = g;
    }
  }

  if (std::count(cfg.methods.begin(), cfg.methods.end(), Method::Algorithm2) > 0) {
    const auto& a2 = j.at("algorithm2");
    cfg.screening.a = a2.value("a", 2);
    cfg.screening.b = a2.value("b", 1.1);
    if (a2.contains("lambda_path"))
      cfg.screening.lambda_path = number_or_list(a2.at("lambda_path"));
    cfg.path_points = a2.value("path_points", 20);
    cfg.lambda5_grid = a2.contains("lambda5_grid") ? number_or_list(a2.at("lambda5_grid"))
                                                   : default_lambda5_grid();
    cfg.algorithm2_bic = cfg.bic;
    cfg.algorithm2_bic.c = a2.value("bic_c", 0.1);
    cfg.algorithm2_bic.validate();
  }

  cfg.exclude_known_from_hub_measures =
      j.value("exclude_known_from_hub_measures", cfg.exclude_known_from_hub_measures);
  return cfg;
}

std::uint64_t replication_sample_seed(std::uint64_t root, int replication) {
  return derive_seed(root, 0x100000000ULL + static_cast<std::uint64_t>(replication));
}

std::uint64_t replication_known_seed(std::uint64_t root, int replication) {
  return derive_seed(root, 0x200000000ULL + static_cast<std::uint64_t>(replication));
}

namespace {

std::set<int> draw_known_hubs(const std::set<int>& hubs, int count, std::uint64_t seed) {
  std::vector<int> pool(hubs.begin(), hubs.end());
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  const int k = std::min<int>(count, static_cast<int>(pool.size()));
  return std::set<int>(pool.begin(), pool.begin() + k);
}

struct ReplicationContext {
  SymmetricMatrix s;
  int n = 0;
  PenaltyConfig hgl;          // lambda2 already resolved
  std::set<int> known;        // drawn/fixed known hubs (algorithm1 only)
};

// Resolves the HGL parameters for one replication: single-candidate lambda2
// is used directly, otherwise the BIC winner over the candidates.
PenaltyConfig resolve_hgl(const ExperimentConfig& cfg, const SymmetricMatrix& s, int n) {
  if (cfg.hgl_lambda2.size() == 1)
    return PenaltyConfig::hub(cfg.hgl_lambda1, cfg.hgl_lambda2.front(), cfg.hgl_lambda3);
  GridSpec grid;
  grid.lambda1 = {cfg.hgl_lambda1};
  grid.lambda2 = cfg.hgl_lambda2;
  grid.lambda3 = {cfg.hgl_lambda3};
  grid.lambda4 = grid.lambda2;
  grid.lambda5 = grid.lambda3;
  grid.region_policy = RegionPolicy::Ignore;
  const GridSelection sel = grid_select(s, n, grid, {}, cfg.admm, cfg.bic);
  return PenaltyConfig::hub(sel.penalty.lambda1(), sel.penalty.lambda2(),
                            sel.penalty.lambda3());
}

RunRecord run_cell(const ExperimentConfig& cfg, Method method, int replication,
                   const GroundTruth& truth, const Sample& sample,
                   const ReplicationContext& ctx) {
  RunRecord rec;
  rec.replication = replication;
  rec.method = method;
  rec.seed = sample.seed;

  const std::set<int> exclude =
      cfg.exclude_known_from_hub_measures ? ctx.known : std::set<int>{};

  const auto started = std::chrono::steady_clock::now();
  try {
    SolveResult fit;
    switch (method) {
      case Method::Gl:
        fit = run_gl(ctx.s, cfg.gl_lambda, cfg.admm);
        break;
      case Method::Hgl:
        fit = solve(ctx.s, ctx.hgl, cfg.admm);
        break;
      case Method::Dhgl:
        fit = solve(ctx.s, *cfg.dhgl, cfg.admm);
        break;
      case Method::Algorithm1: {
        const GridSpec grid = cfg.grid45 ? *cfg.grid45 : default_grid45(ctx.hgl);
        WorkflowResult wf = algorithm1_known_hubs(sample.x, ctx.known, ctx.hgl, grid,
                                                  cfg.extraction, cfg.admm, cfg.bic);
        fit = std::move(wf.estimate);
        break;
      }
      case Method::Algorithm2: {
        ScreeningConfig screening = cfg.screening;
        if (screening.lambda_path.empty())
          screening.lambda_path = default_lambda_path(ctx.s, cfg.path_points);
        WorkflowResult wf = algorithm2_screening(sample.x, ctx.hgl, screening,
                                                 cfg.lambda5_grid, cfg.extraction, cfg.admm,
                                                 cfg.algorithm2_bic);
        fit = std::move(wf.estimate);
        break;
      }
    }
    rec.metrics = score(fit.theta_hat, truth, cfg.extraction, exclude);
    rec.iterations = fit.iterations;
    rec.converged = fit.converged;
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

}  // namespace

RunArtifact run_experiment(const ExperimentConfig& cfg) {
  NetworkSpec network = cfg.network;
  network.seed = derive_seed(cfg.seed, 0);
  const GroundTruth truth = generate_truth(network);

  const int reps = cfg.replications;
  const std::size_t methods = cfg.methods.size();
  RunArtifact artifact;
  artifact.truth = truth;
  artifact.rows.resize(static_cast<std::size_t>(reps) * methods);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= reps) return;
      const std::uint64_t sample_seed = replication_sample_seed(cfg.seed, rep);
      try {
        const Sample sample = sample_gaussian(truth, cfg.n, sample_seed);
        ReplicationContext ctx;
        ctx.s = empirical_covariance(sample.x);
        ctx.n = cfg.n;
        const bool needs_hgl = std::any_of(
            cfg.methods.begin(), cfg.methods.end(), [](Method m) {
              return m == Method::Hgl || m == Method::Algorithm1 || m == Method::Algorithm2;
            });
        if (needs_hgl) ctx.hgl = resolve_hgl(cfg, ctx.s, cfg.n);
        const bool has_alg1 =
            std::count(cfg.methods.begin(), cfg.methods.end(), Method::Algorithm1) > 0;
        if (has_alg1)
          ctx.known = cfg.known_hubs_fixed
                          ? *cfg.known_hubs_fixed
                          : draw_known_hubs(truth.hubs, cfg.known_hub_count,
                                            replication_known_seed(cfg.seed, rep));
        for (std::size_t m = 0; m < methods; ++m)
          artifact.rows[static_cast<std::size_t>(rep) * methods + m] =
              run_cell(cfg, cfg.methods[m], rep, truth, sample, ctx);
      } catch (const std::exception& e) {
        // Data generation or shared setup failed: mark every method row.
        for (std::size_t m = 0; m < methods; ++m) {
          RunRecord rec;
          rec.replication = rep;
          rec.method = cfg.methods[m];
          rec.seed = sample_seed;
          rec.ok = false;
          rec.error = e.what();
          artifact.rows[static_cast<std::size_t>(rep) * methods + m] = rec;
        }
      }
    }
  };

  const int jobs = std::max(1, std::min(cfg.jobs, reps));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return artifact;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace

double write_artifact(const RunArtifact& artifact, const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);

  std::ofstream metrics(dir / "metrics.csv");
  metrics << metrics_csv_header() << '\n';
  std::ofstream runs(dir / "runs.csv");
  runs << "replication,method,iterations,converged,wall_seconds,time_per_iteration\n";

  long failed = 0;
  std::vector<std::string> errors;
  for (const RunRecord& rec : artifact.rows) {
    const std::string name = method_name(rec.method);
    if (rec.ok) {
      metrics << metrics_csv_row(rec.replication, name, rec.metrics, rec.seed) << '\n';
      runs << rec.replication << ',' << name << ',' << rec.iterations << ','
           << (rec.converged ? 1 : 0) << ',' << format_double(rec.wall_seconds) << ','
           << format_double(rec.iterations > 0 ? rec.wall_seconds / rec.iterations : 0.0)
           << '\n';
    } else {
      ++failed;
      metrics << rec.replication << ',' << name << ",nan,nan,nan,nan,nan,0," << rec.seed
              << '\n';
      runs << rec.replication << ',' << name << ",0,0,nan,nan\n";
      errors.push_back(std::to_string(rec.replication) + "," + name + "," + rec.error);
    }
  }
  metrics.close();
  runs.close();

  // Aggregate means per method plus per-measure deltas against the HGL rows.
  struct Accum {
    double correct = 0, hub_edge = 0, hub_node = 0, sse = 0, accuracy = 0;
    long count = 0;
  };
  std::map<std::string, Accum> by_method;
  std::vector<std::string> method_order;
  for (const Method m : cfg.methods) method_order.push_back(method_name(m));
  for (const RunRecord& rec : artifact.rows) {
    if (!rec.ok) continue;
    Accum& acc = by_method[method_name(rec.method)];
    acc.correct += static_cast<double>(rec.metrics.correct_edges);
    acc.hub_edge += rec.metrics.hub_edge_proportion;
    acc.hub_node += rec.metrics.hub_node_proportion;
    acc.sse += rec.metrics.sse;
    acc.accuracy += rec.metrics.hub_accuracy;
    acc.count += 1;
  }
  const bool has_hgl = by_method.count("hgl") > 0 && by_method["hgl"].count > 0;
  std::ofstream agg(dir / "aggregate.csv");
  agg << "method,mean_correct_edges,mean_hub_edge_prop,mean_hub_node_prop,mean_sse,"
         "mean_hub_accuracy,rows_ok,delta_correct_edges_vs_hgl,delta_sse_vs_hgl\n";
  for (const std::string& name : method_order) {
    const Accum& acc = by_method[name];
    if (acc.count == 0) {
      agg << name << ",nan,nan,nan,nan,nan,0,,\n";
      continue;
    }
    const double k = static_cast<double>(acc.count);
    agg << name << ',' << format_double(acc.correct / k) << ','
        << format_double(acc.hub_edge / k) << ',' << format_double(acc.hub_node / k) << ','
        << format_double(acc.sse / k) << ',' << format_double(acc.accuracy / k) << ','
        << acc.count;
    if (has_hgl && name != "hgl") {
      const Accum& h = by_method["hgl"];
      const double hk = static_cast<double>(h.count);
      agg << ',' << format_double(acc.correct / k - h.correct / hk) << ','
          << format_double(acc.sse / k - h.sse / hk);
    } else {
      agg << ",,";
    }
    agg << '\n';
  }
  agg.close();

  if (!errors.empty()) {
    std::ofstream err(dir / "errors.csv");
    err << "replication,method,error\n";
    for (const std::string& line : errors) err << line << '\n';
  }

  return artifact.rows.empty() ? 0.0
                               : static_cast<double>(failed) /
                                     static_cast<double>(artifact.rows.size());
}

BenchConfig parse_bench_config(const nlohmann::json& j) {
  BenchConfig cfg;
  cfg.sizes = j.at("sizes").get<std::vector<int>>();
  cfg.replications = j.value("replications", cfg.replications);
  cfg.proportional = j.value("proportional", cfg.proportional);
  cfg.base = parse_network(j.at("base"));
  cfg.n = j.at("n").get<int>();
  cfg.r = j.at("r").get<int>();
  if (j.contains("hgl")) {
    cfg.lambda1 = j.at("hgl").value("lambda1", cfg.lambda1);
    cfg.lambda2 = j.at("hgl").value("lambda2", cfg.lambda2);
    cfg.lambda3 = j.at("hgl").value("lambda3", cfg.lambda3);
  }
  cfg.lambda4_factor = j.value("lambda4_factor", cfg.lambda4_factor);
  cfg.lambda5 = j.value("lambda5", cfg.lambda5);
  cfg.known_hub_count = j.value("known_hubs", cfg.known_hub_count);
  cfg.seed = j.value("seed", 0ULL);
  if (j.contains("admm")) cfg.admm = parse_admm(j.at("admm"));
  if (j.contains("t")) cfg.extraction.t = j.at("t").get<double>();
  return cfg;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (std::size_t idx = 0; idx < cfg.sizes.size(); ++idx) {
    const int p = cfg.sizes[idx];
    const double scale = static_cast<double>(p) / static_cast<double>(cfg.base.p);
    NetworkSpec spec = cfg.base;
    spec.p = p;
    int n = cfg.n;
    int r = cfg.r;
    if (cfg.proportional) {
      spec.hub_count = std::max(1, static_cast<int>(std::lround(cfg.base.hub_count * scale)));
      n = std::max(2, static_cast<int>(std::lround(cfg.n * scale)));
      r = std::max(1, static_cast<int>(std::lround(cfg.r * scale)));
    }
    HubExtractionConfig extraction = cfg.extraction;
    extraction.r = std::min<int>(r, p - 1);

    const PenaltyConfig hgl = PenaltyConfig::hub(cfg.lambda1, cfg.lambda2, cfg.lambda3);
    double hgl_time = 0, hgl_iters = 0;
    double dhgl_time = 0, dhgl_iters = 0;
    int dhgl_runs = 0;

    for (int rep = 0; rep < cfg.replications; ++rep) {
      spec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(p) * 10000ULL +
                                            static_cast<std::uint64_t>(rep));
      const GroundTruth truth = generate_truth(spec);
      const Sample sample =
          sample_gaussian(truth, n, derive_seed(spec.seed, 1));
      const SymmetricMatrix s = empirical_covariance(sample.x);

      const auto t0 = std::chrono::steady_clock::now();
      const SolveResult hgl_fit = solve(s, hgl, cfg.admm);
      const auto t1 = std::chrono::steady_clock::now();
      hgl_time += std::chrono::duration<double>(t1 - t0).count();
      hgl_iters += hgl_fit.iterations;

      const std::set<int> hgl_hubs = extract_hubs(hgl_fit.theta_hat, extraction);
      const std::set<int> known = draw_known_hubs(
          truth.hubs, cfg.known_hub_count, derive_seed(spec.seed, 2));
      std::set<int> d;
      for (int k : known)
        if (!hgl_hubs.count(k)) d.insert(k);
      if (d.empty()) continue;

      const PenaltyConfig dhgl(cfg.lambda1, cfg.lambda2, cfg.lambda3,
                               cfg.lambda4_factor * cfg.lambda2,
                               std::min(cfg.lambda5, cfg.lambda3), d);
      const auto t2 = std::chrono::steady_clock::now();
      const SolveResult dhgl_fit = solve(s, dhgl, cfg.admm);
      const auto t3 = std::chrono::steady_clock::now();
      dhgl_time += std::chrono::duration<double>(t3 - t2).count();
      dhgl_iters += dhgl_fit.iterations;
      ++dhgl_runs;
    }

    BenchRow hgl_row;
    hgl_row.p = p;
    hgl_row.method = "hgl";
    hgl_row.mean_run_time = hgl_time / cfg.replications;
    hgl_row.mean_iterations = hgl_iters / cfg.replications;
    hgl_row.time_per_iteration = hgl_iters > 0 ? hgl_time / hgl_iters : 0.0;
    hgl_row.runs = cfg.replications;
    rows.push_back(hgl_row);

    BenchRow dhgl_row;
    dhgl_row.p = p;
    dhgl_row.method = "dhgl";
    if (dhgl_runs > 0) {
      dhgl_row.mean_run_time = dhgl_time / dhgl_runs;
      dhgl_row.mean_iterations = dhgl_iters / dhgl_runs;
      dhgl_row.time_per_iteration = dhgl_iters > 0 ? dhgl_time / dhgl_iters : 0.0;
    }
    dhgl_row.runs = dhgl_runs;
    rows.push_back(dhgl_row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "p,method,mean_run_time,mean_iterations,time_per_iteration,runs\n";
  for (const BenchRow& row : rows) {
    out += std::to_string(row.p) + "," + row.method + "," + format_double(row.mean_run_time) +
           "," + format_double(row.mean_iterations) + "," +
           format_double(row.time_per_iteration) + "," + std::to_string(row.runs) + "\n";
  }
  return out;
}

}  // namespace dhgl
