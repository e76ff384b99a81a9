#include "dcadmm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "dcadmm/kernels.hpp"
#include "dcadmm/network.hpp"

namespace dcadmm {

namespace {

double process_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

Vec gradient(const AgentProblem& agent, const Vec& x) {
  if (std::holds_alternative<ZeroObjective>(agent.objective)) return Vec(x.size(), 0.0);
  if (const auto* q = std::get_if<QuadraticObjective>(&agent.objective)) return q->grad(x);
  throw std::invalid_argument("baselines: only smooth objectives are supported");
}

// argmin f_i(x) + (eta/2)||x||^2 - r^T x, the local solve shared by the two
// ADMM baselines (eta = penalty * degree).
Vec penalized_solve(const AgentProblem& agent, double eta, const Vec& r) {
  if (std::holds_alternative<ZeroObjective>(agent.objective)) {
    Vec x = r;
    kernels::scale(1.0 / eta, x);
    return x;
  }
  if (const auto* q = std::get_if<QuadraticObjective>(&agent.objective)) {
    Vec rhs = q->atb();
    kernels::axpy(1.0, r, rhs);
    return q->shifted_factor(eta).solve(rhs);
  }
  throw std::invalid_argument("baselines: only smooth objectives are supported");
}

void validate_doubly_stochastic(const WeightMatrix& w) {
  if (!w.is_column_stochastic(1e-10))
    throw std::invalid_argument("baseline mixing: matrix-class mismatch (columns must sum to 1)");
  for (int i = 0; i < w.n(); ++i) {
    double row = 0.0;
    for (int j = 0; j < w.n(); ++j) {
      row += w(i, j);
      if (std::abs(w(i, j) - w(j, i)) > 1e-10)
        throw std::invalid_argument("baseline mixing: matrix-class mismatch (must be symmetric)");
    }
    if (std::abs(row - 1.0) > 1e-10)
      throw std::invalid_argument("baseline mixing: matrix-class mismatch (rows must sum to 1)");
  }
}

// Receiver-side mixing: out[i] = sum over senders j (in-neighbors + self) of
// weight(i, j) * payload_j, one network round.
std::vector<Vec> mix(Network& net, const std::vector<Vec>& xs,
                     const std::function<double(int, int)>& weight) {
  RoundMailbox mb = net.exchange(xs);
  const std::size_t p = xs[0].size();
  std::vector<Vec> out(xs.size(), Vec(p, 0.0));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (const auto& entry : mb.inbox[i])
      kernels::axpy(weight(static_cast<int>(i), entry.sender), entry.payload.data(),
                    out[i].data(), p);
  return out;
}

struct MetricsScribe {
  const ProblemInstance* problem;
  const OracleSolution* oracle;
  Network* net;
  bool zero_wall_time;
  double t0 = process_cpu_seconds();
  std::vector<IterateMetrics> history;

  // Returns the residual so the caller can test the stopping target.
  std::optional<double> record(long k, const std::vector<Vec>& xs) {
    IterateMetrics m;
    m.k = k;
    if (oracle) {
      const double denom = norm2(oracle->x_star);
      if (denom > 1e-300) {
        double worst = 0.0;
        for (const auto& x : xs) worst = std::max(worst, dist2(x, oracle->x_star) / denom);
        m.max_solution_residual = worst;
      }
      m.objective_gap = problem->total_objective(xs) - oracle->f_star;
    }
    m.inner_iterations = 0;
    m.cum_messages = net->total_messages();
    m.wall_time_s = zero_wall_time ? 0.0 : process_cpu_seconds() - t0;
    history.push_back(m);
    return m.max_solution_residual;
  }
};

}  // namespace

std::string baseline_name(BaselineAlgorithm a) {
  switch (a) {
    case BaselineAlgorithm::dgd:
      return "dgd";
    case BaselineAlgorithm::extra:
      return "extra";
    case BaselineAlgorithm::push_pull:
      return "push_pull";
    case BaselineAlgorithm::dcoadmm:
      return "dcoadmm";
    case BaselineAlgorithm::multi_agent_admm:
      return "multi_agent_admm";
  }
  return "dgd";
}

BaselineAlgorithm parse_baseline(const std::string& name) {
  static const std::map<std::string, BaselineAlgorithm> table = {
      {"dgd", BaselineAlgorithm::dgd},
      {"extra", BaselineAlgorithm::extra},
      {"push_pull", BaselineAlgorithm::push_pull},
      {"dcoadmm", BaselineAlgorithm::dcoadmm},
      {"multi_agent_admm", BaselineAlgorithm::multi_agent_admm}};
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown baseline algorithm: " + name);
  return it->second;
}

bool baseline_needs_undirected(BaselineAlgorithm a) {
  return a != BaselineAlgorithm::push_pull;
}

BaselineRunResult run_baseline(const ProblemInstance& problem, const DirectedGraph& g,
                               const BaselineConfig& cfg, const OracleSolution* oracle,
                               const WeightMatrix* mixing_override) {
  problem.validate();
  if (!(cfg.step_size > 0.0))
    throw std::invalid_argument("run_baseline: step size must be positive");
  const int n = problem.n_agents();
  if (g.n() != n) throw std::invalid_argument("run_baseline: graph/agent count mismatch");
  const int p = problem.dimension;

  BaselineRunResult res;
  std::vector<Vec> xs(n, Vec(p, 0.0));
  if (!cfg.x0.empty()) {
    if (static_cast<int>(cfg.x0.size()) != n)
      throw std::invalid_argument("run_baseline: x0 must have one vector per agent");
    xs = cfg.x0;
  }

  auto finish = [&](MetricsScribe& scribe, Network& net, std::string reason) {
    res.x = xs;
    res.history = std::move(scribe.history);
    res.total_messages = net.total_messages();
    res.total_rounds = net.rounds_elapsed();
    res.stop_reason = std::move(reason);
    return res;
  };
  auto hit_target = [&](const std::optional<double>& residual, long k) {
    if (!cfg.target_residual || !residual) return false;
    if (*residual > *cfg.target_residual) return false;
    res.first_target_iteration = k;
    return true;
  };

  if (baseline_needs_undirected(cfg.algorithm)) {
    DirectedGraph gs = symmetrize(g);
    std::optional<WeightMatrix> own;
    const WeightMatrix* W = mixing_override;
    if (W == nullptr) {
      own.emplace(metropolis_weights(gs));
      W = &*own;
    }
    validate_doubly_stochastic(*W);
    if (W->n() != n) throw std::invalid_argument("run_baseline: mixing size mismatch");
    const DirectedGraph& wg = W->graph();
    Network net(wg);
    MetricsScribe scribe{&problem, oracle, &net, cfg.zero_wall_time, process_cpu_seconds(), {}};
    auto Wij = [&](int i, int j) { return (*W)(i, j); };

    switch (cfg.algorithm) {
      case BaselineAlgorithm::dgd: {
        for (long k = 1; k <= cfg.max_iterations; ++k) {
          std::vector<Vec> mixed = mix(net, xs, Wij);
          for (int i = 0; i < n; ++i) {
            Vec grad = gradient(problem.agents[i], xs[i]);
            kernels::axpy(-cfg.step_size, grad, mixed[i]);
            xs[i] = std::move(mixed[i]);
          }
          if (hit_target(scribe.record(k, xs), k)) return finish(scribe, net, "target_residual");
        }
        return finish(scribe, net, "max_iterations");
      }
      case BaselineAlgorithm::extra: {
        // x^1 = Wx^0 - a grad(x^0);
        // x^{k+1} = (I+W)x^k - (I+W)/2 x^{k-1} - a[grad(x^k) - grad(x^{k-1})].
        // (I+W)/2 x^{k-1} reuses the previous round's Wx^{k-1}, so every
        // iteration costs exactly one exchange.
        std::vector<Vec> x_prev = xs;
        std::vector<Vec> grad_prev(n);
        for (int i = 0; i < n; ++i) grad_prev[i] = gradient(problem.agents[i], xs[i]);
        std::vector<Vec> wx_prev = mix(net, xs, Wij);
        for (int i = 0; i < n; ++i) {
          xs[i] = wx_prev[i];
          kernels::axpy(-cfg.step_size, grad_prev[i], xs[i]);
        }
        if (hit_target(scribe.record(1, xs), 1)) return finish(scribe, net, "target_residual");
        for (long k = 2; k <= cfg.max_iterations; ++k) {
          std::vector<Vec> wx = mix(net, xs, Wij);
          for (int i = 0; i < n; ++i) {
            Vec grad = gradient(problem.agents[i], xs[i]);
            Vec next(p);
            for (int c = 0; c < p; ++c)
              next[c] = xs[i][c] + wx[i][c] - 0.5 * (x_prev[i][c] + wx_prev[i][c]) -
                        cfg.step_size * (grad[c] - grad_prev[i][c]);
            x_prev[i] = std::move(xs[i]);
            xs[i] = std::move(next);
            grad_prev[i] = std::move(grad);
          }
          wx_prev = std::move(wx);
          if (hit_target(scribe.record(k, xs), k)) return finish(scribe, net, "target_residual");
        }
        return finish(scribe, net, "max_iterations");
      }
      case BaselineAlgorithm::dcoadmm: {
        // Edge-splitting consensus ADMM in node-aggregated form, penalty c:
        //   grad f_i(x+) + alpha_i + c d_i x+ - (c/2)(d_i x_i + S_i) = 0,
        //   alpha_i += (c/2)(d_i x+ - S+).
        const double c = cfg.step_size;
        std::vector<Vec> alpha(n, Vec(p, 0.0));
        std::vector<Vec> S(n, Vec(p, 0.0));  // sum of neighbors' current x
        for (long k = 1; k <= cfg.max_iterations; ++k) {
          for (int i = 0; i < n; ++i) {
            const double d_i = wg.in_degree(i);
            Vec r(p);
            for (int cc = 0; cc < p; ++cc)
              r[cc] = -alpha[i][cc] + 0.5 * c * (d_i * xs[i][cc] + S[i][cc]);
            xs[i] = penalized_solve(problem.agents[i], c * d_i, r);
          }
          RoundMailbox mb = net.exchange(xs);
          for (int i = 0; i < n; ++i) {
            Vec sum(p, 0.0);
            for (const auto& e : mb.inbox[i])
              if (e.sender != i) kernels::axpy(1.0, e.payload.data(), sum.data(), p);
            const double d_i = wg.in_degree(i);
            for (int cc = 0; cc < p; ++cc)
              alpha[i][cc] += 0.5 * c * (d_i * xs[i][cc] - sum[cc]);
            S[i] = std::move(sum);
          }
          if (hit_target(scribe.record(k, xs), k)) return finish(scribe, net, "target_residual");
        }
        return finish(scribe, net, "max_iterations");
      }
      case BaselineAlgorithm::multi_agent_admm: {
        // Same splitting kept in explicit per-edge dual form, penalty beta.
        // For edge e={i,j}, i<j: b_e = beta_{e,i} = -beta_{e,j}; z_e is the
        // endpoint midpoint.
        const double beta = cfg.step_size;
        std::vector<std::pair<int, int>> edges;  // (lo, hi) once per undirected edge
        for (auto [to, from] : wg.edges())
          if (from < to) edges.emplace_back(from, to);
        std::vector<Vec> b_e(edges.size(), Vec(p, 0.0));
        std::vector<Vec> S(n, Vec(p, 0.0));
        for (long k = 1; k <= cfg.max_iterations; ++k) {
          std::vector<Vec> alpha(n, Vec(p, 0.0));
          for (std::size_t e = 0; e < edges.size(); ++e) {
            kernels::axpy(1.0, b_e[e], alpha[edges[e].first]);
            kernels::axpy(-1.0, b_e[e], alpha[edges[e].second]);
          }
          for (int i = 0; i < n; ++i) {
            const double d_i = wg.in_degree(i);
            // sum of midpoints z_e over incident edges = (d_i x_i + S_i)/2
            Vec r(p);
            for (int cc = 0; cc < p; ++cc)
              r[cc] = -alpha[i][cc] + 0.5 * beta * (d_i * xs[i][cc] + S[i][cc]);
            xs[i] = penalized_solve(problem.agents[i], beta * d_i, r);
          }
          RoundMailbox mb = net.exchange(xs);
          for (int i = 0; i < n; ++i) {
            Vec sum(p, 0.0);
            for (const auto& e : mb.inbox[i])
              if (e.sender != i) kernels::axpy(1.0, e.payload.data(), sum.data(), p);
            S[i] = std::move(sum);
          }
          for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto [i, j] = edges[e];
            for (int cc = 0; cc < p; ++cc)
              b_e[e][cc] += 0.5 * beta * (xs[i][cc] - xs[j][cc]);
          }
          if (hit_target(scribe.record(k, xs), k)) return finish(scribe, net, "target_residual");
        }
        return finish(scribe, net, "max_iterations");
      }
      default:
        throw std::logic_error("unreachable");
    }
  }

  // Push-Pull on the directed graph: row-stochastic pull of the decision
  // variable, column-stochastic push of the gradient tracker.
  if (mixing_override)
    throw std::invalid_argument(
        "run_baseline: push_pull builds its own row/column stochastic pair");
  Network net(g);
  MetricsScribe scribe{&problem, oracle, &net, cfg.zero_wall_time, process_cpu_seconds(), {}};
  Matrix R = equal_in_neighbor_row_stochastic(g);
  WeightMatrix C = equal_neighbor_weights(g);
  std::vector<Vec> ys(n), grads(n);
  for (int i = 0; i < n; ++i) {
    grads[i] = gradient(problem.agents[i], xs[i]);
    ys[i] = grads[i];
  }
  for (long k = 1; k <= cfg.max_iterations; ++k) {
    std::vector<Vec> step(n, Vec(p));
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < p; ++c) step[i][c] = xs[i][c] - cfg.step_size * ys[i][c];
    xs = mix(net, step, [&](int i, int j) { return R(i, j); });
    std::vector<Vec> mixed_y = mix(net, ys, [&](int i, int j) { return C(i, j); });
    for (int i = 0; i < n; ++i) {
      Vec grad = gradient(problem.agents[i], xs[i]);
      for (int c = 0; c < p; ++c) mixed_y[i][c] += grad[c] - grads[i][c];
      grads[i] = std::move(grad);
      ys[i] = std::move(mixed_y[i]);
    }
    if (hit_target(scribe.record(k, xs), k)) return finish(scribe, net, "target_residual");
  }
  return finish(scribe, net, "max_iterations");
}

double tune_baseline_step(const ProblemInstance& problem, const DirectedGraph& g,
                          BaselineAlgorithm algorithm, const std::vector<double>& candidates,
                          long tune_iterations, const OracleSolution& oracle) {
  double best_step = candidates.front();
  double best_residual = std::numeric_limits<double>::infinity();
  for (double s : candidates) {
    BaselineConfig cfg;
    cfg.algorithm = algorithm;
    cfg.step_size = s;
    cfg.max_iterations = tune_iterations;
    cfg.zero_wall_time = true;
    try {
      BaselineRunResult r = run_baseline(problem, g, cfg, &oracle);
      if (r.history.empty() || !r.history.back().max_solution_residual) continue;
      const double resid = *r.history.back().max_solution_residual;
      if (std::isfinite(resid) && resid < best_residual) {
        best_residual = resid;
        best_step = s;
      }
    } catch (const std::exception&) {
      // diverged or failed; candidate loses
    }
  }
  return best_step;
}

}  // namespace dcadmm
