#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcadmm/admm.hpp"
#include "dcadmm/baselines.hpp"
#include "dcadmm/graph.hpp"
#include "dcadmm/problem.hpp"

namespace dcadmm {

struct GraphConfig {
  std::string model = "erdos_renyi";  // erdos_renyi | ring
  double connectivity = 0.3;
  std::optional<std::uint64_t> seed;  // defaults to the experiment seed
  std::optional<int> diameter_bound;  // override upward only
};

// Declarative experiment description, loadable from a single JSON file.
// Every optional field has a recorded default; the seed is mandatory so a
// config alone pins the whole run. `scale` presets fill the size fields:
//   desk:  n=10,  p=15, 100 samples/agent, 20x15 least squares, p_conn=0.3
//   paper: n=100, p=15, 1e4 samples/agent, 100x15 least squares, p_conn=0.2
struct ExperimentConfig {
  int config_version = 1;
  std::string scenario = "least_squares";  // least_squares | logistic_l1 | consensus_only
  std::string scale = "desk";
  std::uint64_t seed = 0;

  int n_agents = 10;
  int dimension = 15;
  int samples_per_agent = 100;
  int rows_per_agent = 20;
  // least-squares data model: "independent" draws b ~ N(0,I) unrelated to a
  // signal; "linear" draws b = A x_true + sigma * noise. ls_normalize scales
  // each agent's objective to (1/2m)||Ax-b||^2 so that gamma = 1 sits inside
  // the per-agent curvature range.
  std::string ls_model = "independent";
  double ls_noise_sigma = 1.0;
  bool ls_normalize = true;
  double noise_variance = 0.1;
  double zero_fraction = 0.4;
  double mu_factor = 0.1;

  GraphConfig graph;
  double gamma = 1.0;
  std::vector<EpsSchedule> schedules;
  std::vector<std::string> algorithms{"dcdistadmm"};
  std::map<std::string, double> baseline_steps;

  long max_outer_iterations = 500;
  std::optional<double> target_residual;
  std::optional<double> consensus_residual_tol;
  std::optional<double> iterate_change_tol;
  std::int64_t consensus_max_windows = 100000;
  int fista_max_inner = 2000;
  double fista_tolerance = 1e-10;
  long tune_iterations = 300;

  int trials = 1;
  std::string output_dir = "out";
  bool zero_wall_time = false;
  bool trace_consensus = false;
  bool trace_rounds = false;
  // Per-agent residual series next to the max (the figures leave the agent
  // choice open, so both are emitted).
  bool trace_residuals = false;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load_file(const std::string& path);
  nlohmann::json to_json() const;
  std::string config_hash() const;
};

struct GeneratedInstance {
  ProblemInstance problem;
  OracleSolution oracle;
  nlohmann::json provenance;
};

// Sparse true weights and features, noisy sign labels, mu = mu_factor *
// mu_max, per-agent ball radii drawn around the centralized unconstrained
// solution (which stays feasible, so it is also the oracle).
GeneratedInstance generate_logistic_instance(const ExperimentConfig& cfg, std::uint64_t seed);

// Per-agent A_i with iid standard normal entries; b_i per ls_model. Oracle
// from stacked normal equations with iterative refinement; rank-deficient
// draws are retried on the next seed and noted in the provenance.
GeneratedInstance generate_least_squares_instance(const ExperimentConfig& cfg,
                                                  std::uint64_t seed);

GeneratedInstance generate_instance(const ExperimentConfig& cfg, std::uint64_t seed);

DirectedGraph build_graph(const ExperimentConfig& cfg, std::uint64_t seed);

// Runs every configured algorithm over `trials` instances/graphs, writing
// per-run metrics CSVs, the communication histogram, a timing summary and a
// manifest (config echo + hash, seeds, tuned steps, file hashes, failures).
// Returns the manifest.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

// Scans metrics_*.csv under metrics_dir into tidy long format
// (series,k,metric,value) for external plotting.
void plot_data_export(const std::string& metrics_dir, const std::string& out_file);

// Human-readable summary of a finished experiment directory.
std::string report(const std::string& dir);

void write_metrics_csv(const std::string& path, const std::vector<IterateMetrics>& history);

}  // namespace dcadmm
