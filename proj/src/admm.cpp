#include "dcadmm/admm.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dcadmm/kernels.hpp"

namespace dcadmm {

namespace {

double process_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

void for_each_agent(int n, bool parallel, const std::function<void(int)>& body) {
  if (!parallel || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  const unsigned workers =
      std::min(std::max(1u, std::thread::hardware_concurrency()), static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (int i = static_cast<int>(t); i < n; i += static_cast<int>(workers)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Vec x_update(const AgentProblem& agent, const Vec& y, const Vec& lambda, double gamma,
             const FistaConfig& fista, XUpdateStats* stats) {
  if (!(gamma > 0.0)) throw std::invalid_argument("x_update: gamma must be positive");

  if (std::holds_alternative<ZeroObjective>(agent.objective)) {
    // argmin (gamma/2)||x - y||^2 + lambda^T (x - y) over the feasible set.
    Vec x = y;
    kernels::axpy(-1.0 / gamma, lambda, x);
    return project(agent.constraint, std::move(x));
  }

  if (const auto* q = std::get_if<QuadraticObjective>(&agent.objective)) {
    if (std::holds_alternative<NoConstraint>(agent.constraint))
      return solve_quadratic_prox(*q, y, lambda, gamma);
    // Constrained quadratic: proximal gradient with plain projection.
    const double L = q->gram_max_eigenvalue() + gamma;
    auto smooth_value = [&](const Vec& x) {
      double v = q->value(x);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        v += 0.5 * gamma * d * d + lambda[i] * d;
      }
      return v;
    };
    auto smooth_grad = [&](const Vec& x) {
      Vec g = q->grad(x);
      for (std::size_t i = 0; i < x.size(); ++i) g[i] += gamma * (x[i] - y[i]) + lambda[i];
      return g;
    };
    auto prox = [&](const Vec& v, double) { return project(agent.constraint, v); };
    auto zero = [](const Vec&) { return 0.0; };
    FistaResult r = fista_solve(smooth_value, smooth_grad, prox, zero, L, y, fista);
    if (stats) {
      stats->fista_iterations = r.iterations;
      stats->fista_residual = r.residual;
    }
    return r.x;
  }

  const auto& l = std::get<LogisticL1Objective>(agent.objective);
  FistaResult r = solve_logistic_prox(l, agent.constraint, y, lambda, gamma, fista);
  if (stats) {
    stats->fista_iterations = r.iterations;
    stats->fista_residual = r.residual;
  }
  return r.x;
}

void lambda_update(AgentState& agent, double gamma) {
  for (std::size_t i = 0; i < agent.lambda.size(); ++i)
    agent.lambda[i] += gamma * (agent.x[i] - agent.y[i]);
}

std::vector<std::vector<Vec>> ergodic_average(const std::vector<std::vector<Vec>>& trajectory) {
  std::vector<std::vector<Vec>> out(trajectory.size());
  if (trajectory.empty()) return out;
  const std::size_t n = trajectory[0].size();
  std::vector<Vec> mean(n);
  for (std::size_t i = 0; i < n; ++i) mean[i].assign(trajectory[0][i].size(), 0.0);
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double w = 1.0 / static_cast<double>(k + 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < mean[i].size(); ++c)
        mean[i][c] += (trajectory[k][i][c] - mean[i][c]) * w;
    out[k] = mean;
  }
  return out;
}

AdmmRunResult run_dc_dist_admm(const ProblemInstance& problem, const WeightMatrix& P,
                               Network& net, const AdmmOptions& opts) {
  problem.validate();
  const int n = problem.n_agents();
  if (P.n() != n) throw std::invalid_argument("run_dc_dist_admm: matrix/agent count mismatch");
  const int p = problem.dimension;
  const double gamma = problem.gamma;
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  AdmmRunResult res;
  res.agents.assign(n, AgentState{});
  for (auto& a : res.agents) {
    a.x.assign(p, 0.0);
    a.y.assign(p, 0.0);
    a.lambda.assign(p, 0.0);
    a.x_hat.assign(p, 0.0);
  }
  std::vector<Vec> y_hat(n, Vec(p, 0.0));
  std::vector<Vec> x_prev(n, Vec(p, 0.0));

  const double t0 = process_cpu_seconds();
  const std::int64_t messages0 = net.total_messages();

  for (long k = 0; k < opts.stop.max_outer_iterations; ++k) {
    const double eps_k1 = problem.schedule.eps(k + 1);

    // x-update, independent across agents.
    std::vector<XUpdateStats> stats(n);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for_each_agent(n, opts.parallel_x, [&](int i) {
      try {
        x_prev[i] = res.agents[i].x;
        res.agents[i].x = x_update(problem.agents[i], res.agents[i].y, res.agents[i].lambda,
                                   gamma, opts.fista, &stats[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lk(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
    if (failure) std::rethrow_exception(failure);
    for (const auto& s : stats) res.total_fista_iterations += s.fista_iterations;

    // y-update: eps_{k+1}-consensus on x_i + lambda_i/gamma.
    std::vector<Vec> u0(n);
    Vec ybar(p, 0.0);
    for (int i = 0; i < n; ++i) {
      u0[i] = res.agents[i].x;
      kernels::axpy(1.0 / gamma, res.agents[i].lambda, u0[i]);
      kernels::axpy(1.0 / n, u0[i], ybar);
    }
    ConsensusOptions copts;
    copts.eps = eps_k1;
    copts.max_windows = opts.consensus_max_windows;
    ConsensusResult cons = run_epsilon_consensus(u0, P, net, copts, opts.consensus_trace);
    for (int i = 0; i < n; ++i) res.agents[i].y = cons.w_final[i];

    // Monitors against the directly computed average (never enforced).
    {
      double e_sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = dist2(res.agents[i].y, ybar);
        e_sq += d * d;
        ++res.dist_to_average_checks;
        if (d > eps_k1) ++res.dist_to_average_violations;
      }
      ++res.consensus_error_checks;
      if (std::sqrt(e_sq) > sqrt_n * eps_k1) ++res.consensus_error_violations;
    }

    // Dual ascent and ergodic averages.
    double lambda_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      auto& a = res.agents[i];
      lambda_update(a, gamma);
      a.k = k + 1;
      const double w = 1.0 / static_cast<double>(k + 1);
      for (int c = 0; c < p; ++c) {
        a.x_hat[c] += (a.x[c] - a.x_hat[c]) * w;
        y_hat[i][c] += (a.y[c] - y_hat[i][c]) * w;
      }
      lambda_sq += kernels::sq_norm(a.lambda.data(), p);
      if (!all_finite(a.x) || !all_finite(a.y) || !all_finite(a.lambda))
        throw std::runtime_error("run_dc_dist_admm: non-finite state at outer iteration " +
                                 std::to_string(k + 1) + ", agent " + std::to_string(i));
    }
    ++res.lambda_bound_checks;
    if (std::sqrt(lambda_sq) > gamma * sqrt_n * eps_k1) ++res.lambda_bound_violations;

    if (opts.store_trajectory) {
      std::vector<Vec> xs(n), ys(n), ls(n);
      for (int i = 0; i < n; ++i) {
        xs[i] = res.agents[i].x;
        ys[i] = res.agents[i].y;
        ls[i] = res.agents[i].lambda;
      }
      res.x_trajectory.push_back(std::move(xs));
      res.y_trajectory.push_back(std::move(ys));
      res.lambda_trajectory.push_back(std::move(ls));
    }

    // Metrics for this outer iteration.
    IterateMetrics m;
    m.k = k + 1;
    double cr_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = dist2(res.agents[i].x_hat, y_hat[i]);
      cr_sq += d * d;
    }
    m.consensus_residual = std::sqrt(cr_sq);
    if (opts.oracle) {
      double worst = 0.0;
      bool valid = true;
      for (int i = 0; i < n; ++i) {
        const double denom = norm2(opts.oracle->x_star);  // x_i^0 = 0
        if (denom < 1e-300) {
          valid = false;
          break;
        }
        worst = std::max(worst, dist2(res.agents[i].x, opts.oracle->x_star) / denom);
      }
      if (valid) m.max_solution_residual = worst;
      std::vector<Vec> xh(n);
      for (int i = 0; i < n; ++i) xh[i] = res.agents[i].x_hat;
      m.objective_gap = problem.total_objective(xh) - opts.oracle->f_star;
    }
    m.inner_iterations = cons.iterations_used;
    m.cum_messages = net.total_messages() - messages0;
    m.wall_time_s = opts.zero_wall_time ? 0.0 : process_cpu_seconds() - t0;
    res.history.push_back(m);

    // Stopping rules.
    if (opts.stop.target_residual && m.max_solution_residual &&
        *m.max_solution_residual <= *opts.stop.target_residual) {
      res.first_target_iteration = k + 1;
      res.stop_reason = "target_residual";
      break;
    }
    if (opts.stop.consensus_residual_tol && opts.stop.iterate_change_tol) {
      double change = 0.0;
      for (int i = 0; i < n; ++i)
        change = std::max(change, inf_norm(add_scaled(res.agents[i].x, -1.0, x_prev[i])));
      if (*m.consensus_residual <= *opts.stop.consensus_residual_tol &&
          change <= *opts.stop.iterate_change_tol) {
        res.stop_reason = "thresholds";
        break;
      }
    }
  }

  if (res.stop_reason.empty()) res.stop_reason = "max_iterations";
  res.total_messages = net.total_messages() - messages0;
  return res;
}

}  // namespace dcadmm
