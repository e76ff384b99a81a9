#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcadmm/consensus.hpp"
#include "dcadmm/network.hpp"
#include "dcadmm/problem.hpp"
#include "dcadmm/solvers.hpp"

namespace dcadmm {

struct AgentState {
  Vec x, y, lambda;
  Vec x_hat;  // running mean of x^1..x^k, maintained incrementally
  long k = 0;
};

struct IterateMetrics {
  long k = 0;
  std::optional<double> consensus_residual;  // ||x_hat - y_hat|| (stacked)
  std::optional<double> max_solution_residual;
  std::optional<double> objective_gap;
  std::int64_t inner_iterations = 0;  // consensus rounds spent this outer iteration
  std::int64_t cum_messages = 0;
  double wall_time_s = 0.0;
};

struct StoppingRule {
  long max_outer_iterations = 500;
  // Both must fall below their thresholds to stop early.
  std::optional<double> consensus_residual_tol;
  std::optional<double> iterate_change_tol;
  // Stop once max_solution_residual <= target (needs an oracle).
  std::optional<double> target_residual;
};

struct AdmmOptions {
  StoppingRule stop;
  std::int64_t consensus_max_windows = 100000;
  FistaConfig fista;
  const OracleSolution* oracle = nullptr;
  bool zero_wall_time = false;
  bool store_trajectory = false;
  bool parallel_x = false;
  std::vector<ConsensusWindowRecord>* consensus_trace = nullptr;
};

struct AdmmRunResult {
  std::vector<AgentState> agents;
  std::vector<IterateMetrics> history;
  std::int64_t total_messages = 0;
  std::int64_t total_fista_iterations = 0;
  std::string stop_reason;
  std::optional<long> first_target_iteration;

  // Monitors (logged, never enforced): the lambda norm bound
  // ||lambda|| <= gamma*sqrt(n)*eps_k, the stacked consensus error
  // ||e|| <= sqrt(n)*eps_k against the directly computed average, and the
  // per-agent distance-to-average <= eps_k.
  long lambda_bound_checks = 0, lambda_bound_violations = 0;
  long consensus_error_checks = 0, consensus_error_violations = 0;
  long dist_to_average_checks = 0, dist_to_average_violations = 0;

  // Filled when store_trajectory: [outer k][agent].
  std::vector<std::vector<Vec>> x_trajectory, y_trajectory, lambda_trajectory;
};

struct XUpdateStats {
  int fista_iterations = 0;
  double fista_residual = 0.0;
};

// argmin over the agent's feasible set of
//   f_i(x) + (gamma/2)||x - y||^2 + lambda^T (x - y).
// Quadratic objectives without constraints solve in closed form; everything
// else goes through the proximal-gradient path.
Vec x_update(const AgentProblem& agent, const Vec& y, const Vec& lambda, double gamma,
             const FistaConfig& fista, XUpdateStats* stats = nullptr);

// lambda += gamma * (x - y), elementwise.
void lambda_update(AgentState& agent, double gamma);

// Running means of a stored trajectory: out[k][i] = mean of traj[0..k][i].
std::vector<std::vector<Vec>> ergodic_average(const std::vector<std::vector<Vec>>& trajectory);

// The outer loop: local x-minimization, epsilon-consensus y-update with the
// schedule's eps_{k+1}, dual ascent, ergodic averaging and metrics.
AdmmRunResult run_dc_dist_admm(const ProblemInstance& problem, const WeightMatrix& P,
                               Network& net, const AdmmOptions& opts);

}  // namespace dcadmm
