#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcadmm/admm.hpp"
#include "dcadmm/graph.hpp"
#include "dcadmm/problem.hpp"

namespace dcadmm {

// Comparison algorithms, each run over the same network simulator and
// metrics pipeline as the main method. DGD, EXTRA, DCOADMM and
// MultiAgentADMM require symmetric doubly-stochastic mixing, so they run on
// the symmetrized graph with Metropolis weights; Push-Pull runs on the
// directed graph with a row-stochastic/column-stochastic pair.
enum class BaselineAlgorithm { dgd, extra, push_pull, dcoadmm, multi_agent_admm };

std::string baseline_name(BaselineAlgorithm a);
BaselineAlgorithm parse_baseline(const std::string& name);
bool baseline_needs_undirected(BaselineAlgorithm a);

struct BaselineConfig {
  BaselineAlgorithm algorithm = BaselineAlgorithm::dgd;
  // Gradient step size for DGD/EXTRA/Push-Pull; penalty for the ADMM pair.
  double step_size = 0.01;
  long max_iterations = 1000;
  std::optional<double> target_residual;
  bool zero_wall_time = false;
  std::vector<Vec> x0;  // empty: start from zero
};

struct BaselineRunResult {
  std::vector<Vec> x;  // final iterates
  std::vector<IterateMetrics> history;
  std::int64_t total_messages = 0;
  std::int64_t total_rounds = 0;
  std::optional<long> first_target_iteration;
  std::string stop_reason;
};

// mixing_override, when given, replaces the internally built doubly
// stochastic matrix and is validated for the algorithm's requirements
// (throws std::invalid_argument on a matrix-class mismatch).
BaselineRunResult run_baseline(const ProblemInstance& problem, const DirectedGraph& g,
                               const BaselineConfig& cfg, const OracleSolution* oracle = nullptr,
                               const WeightMatrix* mixing_override = nullptr);

// Constant-step grid search: runs each candidate for tune_iterations and
// keeps the one with the smallest final residual (diverged runs lose).
double tune_baseline_step(const ProblemInstance& problem, const DirectedGraph& g,
                          BaselineAlgorithm algorithm, const std::vector<double>& candidates,
                          long tune_iterations, const OracleSolution& oracle);

}  // namespace dcadmm
