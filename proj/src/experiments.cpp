#include "dcadmm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dcadmm/consensus.hpp"
#include "dcadmm/csvio.hpp"
#include "dcadmm/kernels.hpp"
#include "dcadmm/network.hpp"
#include "dcadmm/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dcadmm {

namespace {

const std::set<std::string> kKnownKeys = {
    "config_version", "scenario", "scale", "seed", "n_agents", "dimension",
    "samples_per_agent", "rows_per_agent", "ls_model", "ls_noise_sigma",
    "ls_normalize", "noise_variance", "zero_fraction", "mu_factor", "graph",
    "gamma", "schedules", "algorithms", "baseline_steps",
    "max_outer_iterations", "target_residual", "consensus_residual_tol",
    "iterate_change_tol", "consensus_max_windows", "fista_max_inner",
    "fista_tolerance", "tune_iterations", "trials", "output_dir",
    "zero_wall_time", "trace_consensus", "trace_rounds", "trace_residuals"};

const std::set<std::string> kKnownGraphKeys = {"model", "connectivity", "seed",
                                               "diameter_bound"};

std::string schedule_tag(const EpsSchedule& s) {
  switch (s.kind) {
    case EpsSchedule::Kind::constant:
      return "eps_const";
    case EpsSchedule::Kind::inv_k:
      return "eps_over_k";
    case EpsSchedule::Kind::inv_k_squared:
      return "eps_over_k2";
  }
  return "eps_const";
}

double draw_sparse_normal(std::mt19937_64& rng, std::normal_distribution<double>& normal,
                          std::uniform_real_distribution<double>& unif, double zero_fraction) {
  if (unif(rng) < zero_fraction) return 0.0;
  return normal(rng);
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// Full KKT residual of min loss(x) + mu||x||_1:
//   active j:  |grad_j + mu*sign(x_j)|
//   zero j:    max(0, |grad_j| - mu)
double l1_kkt_residual(const Vec& grad, const Vec& x, double mu) {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0)
      worst = std::max(worst, std::abs(grad[j] + mu * (x[j] > 0.0 ? 1.0 : -1.0)));
    else
      worst = std::max(worst, std::max(0.0, std::abs(grad[j]) - mu));
  }
  return worst;
}

// Centralized l1-logistic solve: FISTA localizes the support, then Newton
// steps restricted to the active orthant polish the solution to near machine
// precision. Small fixed dimension makes the exact Hessian cheap.
std::pair<Vec, double> solve_logistic_l1_centralized(const LogisticL1Objective& obj, double mu) {
  const std::size_t p = obj.samples().cols;
  FistaConfig warm;
  warm.max_inner_iters = 5000;
  warm.inner_tolerance = 1e-6 * std::max(1.0, obj.loss_lipschitz());
  warm.error_on_budget = false;
  Vec x = fista_solve(
              [&](const Vec& v) { return obj.loss_value(v); },
              [&](const Vec& v) { return obj.loss_grad(v); },
              [&](const Vec& v, double t) { return soft_threshold(v, mu * t); },
              [&](const Vec& v) {
                double l1 = 0.0;
                for (double c : v) l1 += std::abs(c);
                return mu * l1;
              },
              obj.loss_lipschitz(), Vec(p, 0.0), warm)
              .x;

  auto composite = [&](const Vec& v) {
    double l1 = 0.0;
    for (double c : v) l1 += std::abs(c);
    return obj.loss_value(v) + mu * l1;
  };

  double kkt = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < 200; ++outer) {
    Vec grad = obj.loss_grad(x);
    kkt = l1_kkt_residual(grad, x, mu);
    if (kkt <= 1e-12) break;

    // Grow the support where the zero-coordinate condition is violated.
    std::vector<std::size_t> support;
    Vec sign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      if (x[j] != 0.0) {
        sign[j] = x[j] > 0.0 ? 1.0 : -1.0;
        support.push_back(j);
      } else if (std::abs(grad[j]) > mu) {
        sign[j] = grad[j] > 0.0 ? -1.0 : 1.0;
        support.push_back(j);
      }
    }
    if (support.empty()) break;

    // Newton system on the support: H_SS d = -(grad_S + mu*sign_S).
    const Matrix& samples = obj.samples();
    Vec margins(samples.rows);
    kernels::matvec(samples.data.data(), samples.rows, p, x.data(), margins.data());
    Matrix H(support.size(), support.size());
    for (std::size_t r = 0; r < samples.rows; ++r) {
      const double z = obj.labels()[r] * margins[r];
      const double s = z > 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
      const double w = s * (1.0 - s);
      if (w == 0.0) continue;
      for (std::size_t a = 0; a < support.size(); ++a) {
        const double wa = w * samples(r, support[a]);
        if (wa == 0.0) continue;
        for (std::size_t b = 0; b < support.size(); ++b)
          H(a, b) += wa * samples(r, support[b]);
      }
    }
    for (std::size_t a = 0; a < support.size(); ++a) H(a, a) += 1e-12;  // PD guard
    Vec rhs(support.size());
    for (std::size_t a = 0; a < support.size(); ++a)
      rhs[a] = -(grad[support[a]] + mu * sign[support[a]]);
    Vec d = Cholesky(H).solve(rhs);

    // Damped step; coordinates that cross zero are clipped to zero.
    const double f0 = composite(x);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      Vec trial = x;
      for (std::size_t a = 0; a < support.size(); ++a) {
        const std::size_t j = support[a];
        double v = x[j] + t * d[a];
        if (x[j] != 0.0 && v * sign[j] < 0.0) v = 0.0;
        trial[j] = v;
      }
      if (composite(trial) <= f0) {
        x = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  kkt = l1_kkt_residual(obj.loss_grad(x), x, mu);
  return {std::move(x), kkt};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");

  ExperimentConfig cfg;
  cfg.config_version = j.value("config_version", 1);
  if (cfg.config_version != 1)
    throw std::invalid_argument("config: unsupported config_version");
  cfg.scenario = j.value("scenario", cfg.scenario);
  if (cfg.scenario != "least_squares" && cfg.scenario != "logistic_l1" &&
      cfg.scenario != "consensus_only")
    throw std::invalid_argument("config: unknown scenario '" + cfg.scenario + "'");
  cfg.scale = j.value("scale", cfg.scale);
  if (cfg.scale != "desk" && cfg.scale != "paper")
    throw std::invalid_argument("config: scale must be 'desk' or 'paper'");

  if (!j.contains("seed"))
    throw std::invalid_argument("config: seed is required (reproducibility enforced)");
  cfg.seed = j.at("seed").get<std::uint64_t>();

  // Scale presets, overridable field by field.
  if (cfg.scale == "paper") {
    cfg.n_agents = 100;
    cfg.samples_per_agent = 10000;
    cfg.rows_per_agent = 100;
    cfg.graph.connectivity = 0.2;
  }
  cfg.n_agents = j.value("n_agents", cfg.n_agents);
  cfg.dimension = j.value("dimension", cfg.dimension);
  cfg.samples_per_agent = j.value("samples_per_agent", cfg.samples_per_agent);
  cfg.rows_per_agent = j.value("rows_per_agent", cfg.rows_per_agent);
  cfg.ls_model = j.value("ls_model", cfg.ls_model);
  if (cfg.ls_model != "independent" && cfg.ls_model != "linear")
    throw std::invalid_argument("config: ls_model must be 'independent' or 'linear'");
  cfg.ls_noise_sigma = j.value("ls_noise_sigma", cfg.ls_noise_sigma);
  if (cfg.ls_noise_sigma < 0.0)
    throw std::invalid_argument("config: ls_noise_sigma must be >= 0");
  cfg.ls_normalize = j.value("ls_normalize", cfg.ls_normalize);
  cfg.noise_variance = j.value("noise_variance", cfg.noise_variance);
  cfg.zero_fraction = j.value("zero_fraction", cfg.zero_fraction);
  cfg.mu_factor = j.value("mu_factor", cfg.mu_factor);
  if (cfg.n_agents < 2 || cfg.dimension < 1)
    throw std::invalid_argument("config: n_agents >= 2 and dimension >= 1 required");

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    for (const auto& [key, _] : g.items())
      if (!kKnownGraphKeys.count(key))
        throw std::invalid_argument("config: unknown graph key '" + key + "'");
    cfg.graph.model = g.value("model", cfg.graph.model);
    if (cfg.graph.model != "erdos_renyi" && cfg.graph.model != "ring")
      throw std::invalid_argument("config: graph model must be erdos_renyi or ring");
    cfg.graph.connectivity = g.value("connectivity", cfg.graph.connectivity);
    if (g.contains("seed")) cfg.graph.seed = g.at("seed").get<std::uint64_t>();
    if (g.contains("diameter_bound")) cfg.graph.diameter_bound = g.at("diameter_bound").get<int>();
  }

  cfg.gamma = j.value("gamma", cfg.gamma);
  if (j.contains("schedules")) {
    for (const json& s : j.at("schedules"))
      cfg.schedules.push_back(EpsSchedule::parse(s.at("kind").get<std::string>(),
                                                 s.value("c", 0.01)));
  } else {
    cfg.schedules = {EpsSchedule::parse("constant", 0.01), EpsSchedule::parse("1/k", 0.01),
                     EpsSchedule::parse("1/k^2", 0.01)};
  }
  if (j.contains("algorithms"))
    cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  for (const auto& a : cfg.algorithms)
    if (a != "dcdistadmm") parse_baseline(a);  // validates the name
  if (j.contains("baseline_steps"))
    cfg.baseline_steps = j.at("baseline_steps").get<std::map<std::string, double>>();

  cfg.max_outer_iterations = j.value("max_outer_iterations", cfg.max_outer_iterations);
  if (j.contains("target_residual") && !j.at("target_residual").is_null())
    cfg.target_residual = j.at("target_residual").get<double>();
  if (j.contains("consensus_residual_tol") && !j.at("consensus_residual_tol").is_null())
    cfg.consensus_residual_tol = j.at("consensus_residual_tol").get<double>();
  if (j.contains("iterate_change_tol") && !j.at("iterate_change_tol").is_null())
    cfg.iterate_change_tol = j.at("iterate_change_tol").get<double>();
  cfg.consensus_max_windows = j.value("consensus_max_windows", cfg.consensus_max_windows);
  cfg.fista_max_inner = j.value("fista_max_inner", cfg.fista_max_inner);
  cfg.fista_tolerance = j.value("fista_tolerance", cfg.fista_tolerance);
  cfg.tune_iterations = j.value("tune_iterations", cfg.tune_iterations);
  cfg.trials = j.value("trials", cfg.trials);
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.zero_wall_time = j.value("zero_wall_time", cfg.zero_wall_time);
  cfg.trace_consensus = j.value("trace_consensus", cfg.trace_consensus);
  cfg.trace_rounds = j.value("trace_rounds", cfg.trace_rounds);
  cfg.trace_residuals = j.value("trace_residuals", cfg.trace_residuals);
  return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  return from_json(json::parse(read_text_file(path)));
}

json ExperimentConfig::to_json() const {
  json j;
  j["config_version"] = config_version;
  j["scenario"] = scenario;
  j["scale"] = scale;
  j["seed"] = seed;
  j["n_agents"] = n_agents;
  j["dimension"] = dimension;
  j["samples_per_agent"] = samples_per_agent;
  j["rows_per_agent"] = rows_per_agent;
  j["ls_model"] = ls_model;
  j["ls_noise_sigma"] = ls_noise_sigma;
  j["ls_normalize"] = ls_normalize;
  j["noise_variance"] = noise_variance;
  j["zero_fraction"] = zero_fraction;
  j["mu_factor"] = mu_factor;
  j["graph"]["model"] = graph.model;
  j["graph"]["connectivity"] = graph.connectivity;
  if (graph.seed) j["graph"]["seed"] = *graph.seed;
  if (graph.diameter_bound) j["graph"]["diameter_bound"] = *graph.diameter_bound;
  j["gamma"] = gamma;
  json scheds = json::array();
  for (const auto& s : schedules) scheds.push_back({{"kind", s.name()}, {"c", s.c}});
  j["schedules"] = scheds;
  j["algorithms"] = algorithms;
  j["baseline_steps"] = baseline_steps;
  j["max_outer_iterations"] = max_outer_iterations;
  if (target_residual) j["target_residual"] = *target_residual;
  if (consensus_residual_tol) j["consensus_residual_tol"] = *consensus_residual_tol;
  if (iterate_change_tol) j["iterate_change_tol"] = *iterate_change_tol;
  j["consensus_max_windows"] = consensus_max_windows;
  j["fista_max_inner"] = fista_max_inner;
  j["fista_tolerance"] = fista_tolerance;
  j["tune_iterations"] = tune_iterations;
  j["trials"] = trials;
  j["output_dir"] = output_dir;
  j["zero_wall_time"] = zero_wall_time;
  j["trace_consensus"] = trace_consensus;
  j["trace_rounds"] = trace_rounds;
  j["trace_residuals"] = trace_residuals;
  return j;
}

std::string ExperimentConfig::config_hash() const { return fnv1a64_hex(to_json().dump()); }

DirectedGraph build_graph(const ExperimentConfig& cfg, std::uint64_t seed) {
  DirectedGraph g = cfg.graph.model == "ring"
                        ? ring_digraph(cfg.n_agents)
                        : erdos_renyi_digraph(cfg.n_agents, cfg.graph.connectivity, seed);
  if (cfg.graph.diameter_bound) g.set_diameter_bound(*cfg.graph.diameter_bound);
  return g;
}

GeneratedInstance generate_logistic_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
  const int n = cfg.n_agents;
  const int p = cfg.dimension;
  const int m = cfg.samples_per_agent;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double noise_sd = std::sqrt(cfg.noise_variance);

  Vec x_true(p);
  for (int c = 0; c < p; ++c)
    x_true[c] = draw_sparse_normal(rng, normal, unif, cfg.zero_fraction);

  Matrix all_samples(static_cast<std::size_t>(n) * m, p);
  Vec all_labels(static_cast<std::size_t>(n) * m);
  for (std::size_t r = 0; r < all_samples.rows; ++r) {
    double margin = 0.0;
    for (int c = 0; c < p; ++c) {
      const double a = draw_sparse_normal(rng, normal, unif, cfg.zero_fraction);
      all_samples(r, c) = a;
      margin += a * x_true[c];
    }
    const double noisy = margin + (noise_sd > 0.0 ? noise_sd * normal(rng) : 0.0);
    all_labels[r] = noisy >= 0.0 ? 1.0 : -1.0;
  }

  const double mumax = mu_max(all_samples, all_labels);
  const double mu = cfg.mu_factor * mumax;

  // Centralized unconstrained solve; it stays strictly inside every ball
  // below, so it is also the constrained optimum.
  LogisticL1Objective full(all_samples, all_labels, mu);
  auto [x_central, kkt] = solve_logistic_l1_centralized(full, mu);
  if (kkt > 1e-8)
    throw std::runtime_error("logistic oracle: centralized KKT residual above 1e-8");

  OracleSolution oracle;
  oracle.x_star = x_central;
  oracle.method = "centralized proximal gradient + orthant Newton polish, full data";
  oracle.kkt_residual = kkt;
  double l1 = 0.0;
  for (double xc : x_central) l1 += std::abs(xc);
  oracle.f_star = full.loss_value(x_central) + mu * l1;

  const double xc_sq = kernels::sq_norm(x_central.data(), x_central.size());
  ProblemInstance problem;
  problem.dimension = p;
  problem.gamma = cfg.gamma;
  Vec radii(n);
  for (int i = 0; i < n; ++i) {
    Matrix samples(m, p);
    Vec labels(m);
    for (int r = 0; r < m; ++r) {
      const std::size_t row = static_cast<std::size_t>(i) * m + r;
      std::copy(all_samples.row(row), all_samples.row(row) + p, samples.row(r));
      labels[r] = all_labels[row];
    }
    const double xi = unif(rng);
    radii[i] = (1.0 + xi) * xc_sq;
    problem.agents.push_back(
        {LogisticL1Objective(std::move(samples), std::move(labels), mu / n),
         BallConstraint{radii[i]}});
  }
  problem.validate();

  json prov;
  prov["scenario"] = "logistic_l1";
  prov["seed"] = seed;
  prov["mu_max"] = mumax;
  prov["mu"] = mu;
  prov["x_true"] = vec_to_json(x_true);
  prov["ball_radii"] = vec_to_json(radii);
  prov["oracle_kkt_residual"] = kkt;
  return {std::move(problem), std::move(oracle), std::move(prov)};
}

GeneratedInstance generate_least_squares_instance(const ExperimentConfig& cfg,
                                                  std::uint64_t seed) {
  const int n = cfg.n_agents;
  const int p = cfg.dimension;
  const int m = cfg.rows_per_agent;
  int regenerated = 0;
  std::uint64_t use_seed = seed;

  const bool linear = cfg.ls_model == "linear";
  // Normalization to a mean-square objective, folded into the data so every
  // consumer (oracle included) sees one consistent f_i.
  const double scale = cfg.ls_normalize ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;

  for (;; ++regenerated, ++use_seed) {
    if (regenerated > 32)
      throw std::runtime_error("least_squares generator: persistent rank deficiency");
    std::mt19937_64 rng(use_seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Vec x_true;
    if (linear) {
      x_true.resize(p);
      for (int c = 0; c < p; ++c) x_true[c] = normal(rng);
    }

    ProblemInstance problem;
    problem.dimension = p;
    problem.gamma = cfg.gamma;
    Matrix H(p, p);
    Vec rhs(p, 0.0);
    for (int i = 0; i < n; ++i) {
      Matrix A(m, p);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < p; ++c) A(r, c) = scale * normal(rng);
      Vec b(m);
      if (linear) {
        b = matvec(A, x_true);
        if (cfg.ls_noise_sigma > 0.0)
          for (int r = 0; r < m; ++r) b[r] += scale * cfg.ls_noise_sigma * normal(rng);
      } else {
        for (int r = 0; r < m; ++r) b[r] = scale * normal(rng);
      }
      QuadraticObjective q(std::move(A), std::move(b));
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) H(r, c) += q.gram()(r, c);
      kernels::axpy(1.0, q.atb(), rhs);
      problem.agents.push_back({std::move(q), NoConstraint{}});
    }

    // Stacked normal equations with iterative refinement.
    OracleSolution oracle;
    try {
      Cholesky chol(H);
      Vec x = chol.solve(rhs);
      for (int refine = 0; refine < 2; ++refine) {
        Vec r = rhs;
        kernels::axpy(-1.0, matvec(H, x), r);
        kernels::axpy(1.0, chol.solve(r), x);
      }
      Vec grad = matvec(H, x);
      kernels::axpy(-1.0, rhs, grad);
      oracle.kkt_residual = norm2(grad);
      if (oracle.kkt_residual > 1e-10)
        throw std::runtime_error("stacked solve residual above 1e-10");
      oracle.x_star = std::move(x);
    } catch (const std::runtime_error&) {
      continue;  // rank-deficient or ill-conditioned draw; next seed
    }
    oracle.method = "stacked normal equations, Cholesky + iterative refinement";
    std::vector<Vec> xs(n, oracle.x_star);
    oracle.f_star = problem.total_objective(xs);
    problem.validate();

    json prov;
    prov["scenario"] = "least_squares";
    prov["seed"] = seed;
    prov["used_seed"] = use_seed;
    prov["regenerated"] = regenerated;
    prov["ls_model"] = cfg.ls_model;
    prov["ls_noise_sigma"] = cfg.ls_noise_sigma;
    prov["ls_normalize"] = cfg.ls_normalize;
    if (linear) prov["x_true"] = vec_to_json(x_true);
    prov["oracle_kkt_residual"] = oracle.kkt_residual;
    return {std::move(problem), std::move(oracle), std::move(prov)};
  }
}

GeneratedInstance generate_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.scenario == "logistic_l1") return generate_logistic_instance(cfg, seed);
  if (cfg.scenario == "least_squares") return generate_least_squares_instance(cfg, seed);
  // consensus_only: zero objectives, no constraints; the oracle is the
  // average of the protocol's initial vectors, filled in by the runner.
  ProblemInstance problem;
  problem.dimension = cfg.dimension;
  problem.gamma = cfg.gamma;
  for (int i = 0; i < cfg.n_agents; ++i)
    problem.agents.push_back({ZeroObjective{}, NoConstraint{}});
  json prov;
  prov["scenario"] = "consensus_only";
  prov["seed"] = seed;
  return {std::move(problem), OracleSolution{}, std::move(prov)};
}

void write_metrics_csv(const std::string& path, const std::vector<IterateMetrics>& history) {
  std::string out =
      "k,consensus_residual,max_solution_residual,objective_gap,inner_iters,cum_messages,"
      "wall_time_s\n";
  for (const auto& m : history) {
    out += std::to_string(m.k);
    out += ',';
    out += m.consensus_residual ? format_double(*m.consensus_residual) : "";
    out += ',';
    out += m.max_solution_residual ? format_double(*m.max_solution_residual) : "";
    out += ',';
    out += m.objective_gap ? format_double(*m.objective_gap) : "";
    out += ',';
    out += std::to_string(m.inner_iterations);
    out += ',';
    out += std::to_string(m.cum_messages);
    out += ',';
    out += format_double(m.wall_time_s);
    out += '\n';
  }
  write_text_file(path, out);
}

namespace {

void write_consensus_trace_csv(const std::string& path,
                               const std::vector<ConsensusWindowRecord>& trace, int n) {
  std::string out = "window,global_flag,spread_window_start,spread_window_end";
  for (int i = 0; i < n; ++i) out += ",rhat_" + std::to_string(i);
  out += '\n';
  for (const auto& rec : trace) {
    out += std::to_string(rec.window);
    out += ',' + std::to_string(rec.global_flag);
    out += ',' + format_double(rec.spread_window_start);
    out += ',' + format_double(rec.spread_window_end);
    for (double r : rec.rhat) out += ',' + format_double(r);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_round_trace_csv(const std::string& path, const Network& net) {
  std::string out = "round,messages\n";
  for (const auto& [round, messages] : net.round_trace())
    out += std::to_string(round) + ',' + std::to_string(messages) + '\n';
  write_text_file(path, out);
}

// Per-agent solution residuals alongside the max, from a stored trajectory.
bool write_residuals_csv(const std::string& path, const std::vector<std::vector<Vec>>& x_traj,
                         const OracleSolution& oracle) {
  const double denom = norm2(oracle.x_star);
  if (x_traj.empty() || denom < 1e-300) return false;
  const std::size_t n = x_traj[0].size();
  std::string out = "k,max_residual";
  for (std::size_t i = 0; i < n; ++i) out += ",residual_agent_" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < x_traj.size(); ++k) {
    std::vector<double> res(n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res[i] = dist2(x_traj[k][i], oracle.x_star) / denom;
      worst = std::max(worst, res[i]);
    }
    out += std::to_string(k + 1) + ',' + format_double(worst);
    for (double r : res) out += ',' + format_double(r);
    out += '\n';
  }
  write_text_file(path, out);
  return true;
}

struct HistogramRow {
  std::string series;
  int trial;
  long outer_iterations;
  std::int64_t rounds;
  std::int64_t messages;
  bool reached_target;
};

}  // namespace

json run_experiment(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  const auto out_path = [&](const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
  };

  json manifest;
  manifest["config"] = cfg.to_json();
  manifest["config_hash"] = cfg.config_hash();
  manifest["failures"] = json::array();
  manifest["trials"] = json::array();
  json tuned_steps = json::object();

  std::vector<HistogramRow> histogram;
  std::map<std::string, std::vector<double>> wall_times;
  std::vector<std::string> artifact_files;

  const std::uint64_t graph_seed0 = cfg.graph.seed ? *cfg.graph.seed : cfg.seed + 101;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t graph_seed = graph_seed0 + trial;
    const std::uint64_t inst_seed = cfg.seed + trial;
    DirectedGraph g = build_graph(cfg, graph_seed);
    GeneratedInstance inst = generate_instance(cfg, inst_seed);

    json trial_info;
    trial_info["trial"] = trial;
    trial_info["graph_seed"] = graph_seed;
    trial_info["instance_seed"] = inst_seed;
    trial_info["graph_n"] = g.n();
    trial_info["graph_edges"] = g.edge_count();
    trial_info["graph_diameter"] = g.exact_diameter();
    trial_info["provenance"] = inst.provenance;
    manifest["trials"].push_back(trial_info);

    if (trial == 0 && cfg.scenario != "consensus_only") {
      {
        std::ostringstream ss;
        write_edge_list(g, ss);
        write_text_file(out_path("graph.txt"), ss.str());
        artifact_files.push_back("graph.txt");
      }
      {
        std::ostringstream ss;
        write_weights_csv(equal_neighbor_weights(g), ss);
        write_text_file(out_path("weights.csv"), ss.str());
        artifact_files.push_back("weights.csv");
      }
      json oj;
      oj["x_star"] = vec_to_json(inst.oracle.x_star);
      oj["f_star"] = inst.oracle.f_star;
      oj["method"] = inst.oracle.method;
      oj["kkt_residual"] = inst.oracle.kkt_residual;
      write_text_file(out_path("oracle.json"), oj.dump(2) + "\n");
      artifact_files.push_back("oracle.json");
    }

    if (cfg.scenario == "consensus_only") {
      // Protocol-only study: run epsilon-consensus on random initial vectors.
      std::mt19937_64 rng(inst_seed ^ 0x9e3779b97f4a7c15ull);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<Vec> u0(cfg.n_agents, Vec(cfg.dimension));
      for (auto& u : u0)
        for (auto& x : u) x = normal(rng);
      WeightMatrix P = equal_neighbor_weights(g);
      for (const auto& sched : cfg.schedules) {
        const std::string series = "consensus_" + schedule_tag(sched);
        try {
          Network net(g);
          if (cfg.trace_rounds) net.enable_round_trace();
          ConsensusOptions copts;
          copts.eps = sched.eps(1);
          copts.max_windows = cfg.consensus_max_windows;
          std::vector<ConsensusWindowRecord> trace;
          ConsensusResult r = run_epsilon_consensus(u0, P, net, copts, &trace);
          const std::string trace_file =
              "trace_" + series + "_trial" + std::to_string(trial) + ".csv";
          write_consensus_trace_csv(out_path(trace_file), trace, g.n());
          artifact_files.push_back(trace_file);
          histogram.push_back({series, trial, static_cast<long>(r.radii_history.size()),
                               r.iterations_used, r.messages, true});
        } catch (const std::exception& e) {
          manifest["failures"].push_back(
              {{"series", series}, {"trial", trial}, {"error", e.what()}});
        }
      }
      continue;
    }

    for (const auto& algorithm : cfg.algorithms) {
      if (algorithm == "dcdistadmm") {
        for (const auto& sched : cfg.schedules) {
          const std::string series = "dcdistadmm_" + schedule_tag(sched);
          try {
            ProblemInstance problem = inst.problem;
            problem.schedule = sched;
            WeightMatrix P = equal_neighbor_weights(g);
            Network net(g);
            if (cfg.trace_rounds) net.enable_round_trace();
            AdmmOptions opts;
            opts.stop.max_outer_iterations = cfg.max_outer_iterations;
            opts.stop.target_residual = cfg.target_residual;
            opts.stop.consensus_residual_tol = cfg.consensus_residual_tol;
            opts.stop.iterate_change_tol = cfg.iterate_change_tol;
            opts.consensus_max_windows = cfg.consensus_max_windows;
            opts.fista.max_inner_iters = cfg.fista_max_inner;
            opts.fista.inner_tolerance = cfg.fista_tolerance;
            opts.fista.error_on_budget = false;
            opts.oracle = &inst.oracle;
            opts.zero_wall_time = cfg.zero_wall_time;
            opts.store_trajectory = cfg.trace_residuals;
            std::vector<ConsensusWindowRecord> trace;
            if (cfg.trace_consensus) opts.consensus_trace = &trace;

            AdmmRunResult r = run_dc_dist_admm(problem, P, net, opts);

            const std::string metrics_file =
                "metrics_" + series + "_trial" + std::to_string(trial) + ".csv";
            write_metrics_csv(out_path(metrics_file), r.history);
            artifact_files.push_back(metrics_file);
            if (cfg.trace_consensus) {
              const std::string trace_file =
                  "trace_consensus_" + series + "_trial" + std::to_string(trial) + ".csv";
              write_consensus_trace_csv(out_path(trace_file), trace, g.n());
              artifact_files.push_back(trace_file);
            }
            if (cfg.trace_rounds) {
              const std::string trace_file =
                  "trace_rounds_" + series + "_trial" + std::to_string(trial) + ".csv";
              write_round_trace_csv(out_path(trace_file), net);
              artifact_files.push_back(trace_file);
            }
            if (cfg.trace_residuals) {
              const std::string res_file =
                  "residuals_" + series + "_trial" + std::to_string(trial) + ".csv";
              if (write_residuals_csv(out_path(res_file), r.x_trajectory, inst.oracle))
                artifact_files.push_back(res_file);
            }
            histogram.push_back({series, trial,
                                 r.history.empty() ? 0 : r.history.back().k,
                                 net.rounds_elapsed(), net.total_messages(),
                                 r.first_target_iteration.has_value()});
            if (!r.history.empty())
              wall_times[series].push_back(r.history.back().wall_time_s);
          } catch (const std::exception& e) {
            manifest["failures"].push_back(
                {{"series", series}, {"trial", trial}, {"error", e.what()}});
          }
        }
        continue;
      }

      const std::string series = algorithm;
      try {
        BaselineConfig bcfg;
        bcfg.algorithm = parse_baseline(algorithm);
        bcfg.max_iterations = cfg.max_outer_iterations;
        bcfg.target_residual = cfg.target_residual;
        bcfg.zero_wall_time = cfg.zero_wall_time;
        if (auto it = cfg.baseline_steps.find(algorithm); it != cfg.baseline_steps.end()) {
          bcfg.step_size = it->second;
        } else {
          if (!tuned_steps.contains(algorithm)) {
            const std::vector<double> grid = {1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2,
                                              2e-2, 5e-2, 1e-1, 2e-1, 5e-1, 1.0};
            tuned_steps[algorithm] = tune_baseline_step(inst.problem, g, bcfg.algorithm, grid,
                                                        cfg.tune_iterations, inst.oracle);
          }
          bcfg.step_size = tuned_steps[algorithm].get<double>();
        }

        BaselineRunResult r = run_baseline(inst.problem, g, bcfg, &inst.oracle);
        const std::string metrics_file =
            "metrics_" + series + "_trial" + std::to_string(trial) + ".csv";
        write_metrics_csv(out_path(metrics_file), r.history);
        artifact_files.push_back(metrics_file);
        histogram.push_back({series, trial, r.history.empty() ? 0 : r.history.back().k,
                             r.total_rounds, r.total_messages,
                             r.first_target_iteration.has_value()});
        if (!r.history.empty()) wall_times[series].push_back(r.history.back().wall_time_s);
      } catch (const std::exception& e) {
        manifest["failures"].push_back(
            {{"series", series}, {"trial", trial}, {"error", e.what()}});
      }
    }
  }

  {
    std::string out = "series,trial,outer_iterations,rounds,messages,reached_target\n";
    for (const auto& row : histogram) {
      out += row.series + ',' + std::to_string(row.trial) + ',' +
             std::to_string(row.outer_iterations) + ',' + std::to_string(row.rounds) + ',' +
             std::to_string(row.messages) + ',' + (row.reached_target ? "1" : "0") + '\n';
    }
    write_text_file(out_path("histogram_communication.csv"), out);
    artifact_files.push_back("histogram_communication.csv");
  }
  {
    std::string out = "series,runs,mean_wall_time_s\n";
    for (const auto& [series, times] : wall_times) {
      double mean = 0.0;
      for (double t : times) mean += t;
      if (!times.empty()) mean /= static_cast<double>(times.size());
      out += series + ',' + std::to_string(times.size()) + ',' + format_double(mean) + '\n';
    }
    write_text_file(out_path("timing_summary.csv"), out);
    artifact_files.push_back("timing_summary.csv");
  }

  manifest["tuned_steps"] = tuned_steps;
  json files = json::object();
  for (const auto& f : artifact_files) files[f] = file_hash_hex(out_path(f));
  manifest["files"] = files;
  write_text_file(out_path("manifest.json"), manifest.dump(2) + "\n");
  return manifest;
}

void plot_data_export(const std::string& metrics_dir, const std::string& out_file) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(metrics_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("metrics_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv")
      files.push_back(name);
  }
  if (files.empty()) throw std::runtime_error("plot_data_export: no metrics CSVs found");
  std::sort(files.begin(), files.end());

  std::string out = "series,k,metric,value\n";
  for (const auto& name : files) {
    const std::string series = name.substr(8, name.size() - 12);
    auto rows = parse_csv(read_text_file((fs::path(metrics_dir) / name).string()));
    if (rows.empty()) continue;
    const auto& header = rows[0];
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      for (std::size_t c = 1; c < row.size() && c < header.size(); ++c) {
        if (row[c].empty()) continue;
        out += series + ',' + row[0] + ',' + header[c] + ',' + row[c] + '\n';
      }
    }
  }
  write_text_file(out_file, out);
}

std::string report(const std::string& dir) {
  json manifest = json::parse(read_text_file((fs::path(dir) / "manifest.json").string()));
  std::ostringstream os;
  os << "experiment report: " << dir << "\n";
  os << "  scenario: " << manifest["config"]["scenario"].get<std::string>()
     << "  scale: " << manifest["config"]["scale"].get<std::string>()
     << "  trials: " << manifest["config"]["trials"].get<int>() << "\n";
  os << "  config hash: " << manifest["config_hash"].get<std::string>() << "\n";

  const auto hist_path = (fs::path(dir) / "histogram_communication.csv").string();
  if (fs::exists(hist_path)) {
    auto rows = parse_csv(read_text_file(hist_path));
    std::map<std::string, std::pair<double, long>> rounds_acc;
    std::map<std::string, long> reached;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      rounds_acc[row[0]].first += std::stod(row[3]);
      rounds_acc[row[0]].second += 1;
      reached[row[0]] += row[5] == "1";
    }
    os << "  communication rounds (mean over trials):\n";
    for (const auto& [series, acc] : rounds_acc)
      os << "    " << series << ": " << acc.first / std::max(1l, acc.second) << "  (reached target "
         << reached[series] << "/" << acc.second << ")\n";
  }

  const auto timing_path = (fs::path(dir) / "timing_summary.csv").string();
  if (fs::exists(timing_path)) {
    auto rows = parse_csv(read_text_file(timing_path));
    std::vector<std::pair<double, std::string>> ranked;
    for (std::size_t r = 1; r < rows.size(); ++r)
      ranked.emplace_back(std::stod(rows[r][2]), rows[r][0]);
    std::sort(ranked.begin(), ranked.end());
    os << "  mean CPU time per run, fastest first (informational, host-dependent):\n";
    for (const auto& [t, series] : ranked) os << "    " << series << ": " << t << " s\n";
  }

  const auto& failures = manifest["failures"];
  os << "  failures: " << failures.size() << "\n";
  for (const auto& f : failures)
    os << "    " << f["series"].get<std::string>() << " trial " << f["trial"].get<int>() << ": "
       << f["error"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace dcadmm
