#include <doctest.h>

#include <cmath>
#include <random>

#include "dcadmm/baselines.hpp"

using namespace dcadmm;

namespace {

ProblemInstance identical_quadratics(int n, const Vec& a) {
  const int p = static_cast<int>(a.size());
  ProblemInstance prob;
  prob.dimension = p;
  Matrix I(p, p);
  for (int i = 0; i < p; ++i) I(i, i) = 1.0;
  for (int i = 0; i < n; ++i) prob.agents.push_back({QuadraticObjective(I, a), NoConstraint{}});
  return prob;
}

ProblemInstance consensus_only(int n, int p) {
  ProblemInstance prob;
  prob.dimension = p;
  for (int i = 0; i < n; ++i) prob.agents.push_back({ZeroObjective{}, NoConstraint{}});
  return prob;
}

double spread(const std::vector<Vec>& xs) {
  double m = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) m = std::max(m, dist2(xs[i], xs[j]));
  return m;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("every baseline solves the identical-quadratic instance") {
  const Vec a{1.0, -0.5};
  ProblemInstance prob = identical_quadratics(2, a);
  DirectedGraph g = ring_digraph(2);
  struct Case {
    BaselineAlgorithm alg;
    double step;
  };
  // Steps within each method's documented stability range for unit Hessians.
  for (auto [alg, step] : {Case{BaselineAlgorithm::dgd, 0.5},
                           Case{BaselineAlgorithm::extra, 0.5},
                           Case{BaselineAlgorithm::push_pull, 0.3},
                           Case{BaselineAlgorithm::dcoadmm, 1.0},
                           Case{BaselineAlgorithm::multi_agent_admm, 1.0}}) {
    BaselineConfig cfg;
    cfg.algorithm = alg;
    cfg.step_size = step;
    cfg.max_iterations = 400;
    BaselineRunResult r = run_baseline(prob, g, cfg);
    for (const auto& x : r.x) {
      INFO("algorithm ", baseline_name(alg));
      CHECK(dist2(x, a) <= 1e-6);
    }
  }
}

TEST_CASE("message accounting per iteration") {
  ProblemInstance prob = identical_quadratics(5, Vec{1.0});
  DirectedGraph g = erdos_renyi_digraph(5, 0.5, 19);
  DirectedGraph gs = symmetrize(g);

  for (auto alg : {BaselineAlgorithm::dgd, BaselineAlgorithm::extra, BaselineAlgorithm::dcoadmm,
                   BaselineAlgorithm::multi_agent_admm}) {
    BaselineConfig cfg;
    cfg.algorithm = alg;
    cfg.step_size = alg == BaselineAlgorithm::dgd || alg == BaselineAlgorithm::extra ? 0.2 : 1.0;
    cfg.max_iterations = 7;
    BaselineRunResult r = run_baseline(prob, g, cfg);
    INFO("algorithm ", baseline_name(alg));
    CHECK(r.total_messages == 7 * gs.edge_count());
  }

  BaselineConfig pp;
  pp.algorithm = BaselineAlgorithm::push_pull;
  pp.step_size = 0.05;
  pp.max_iterations = 7;
  BaselineRunResult r = run_baseline(prob, g, pp);
  CHECK(r.total_messages == 2 * 7 * g.edge_count());
}

TEST_CASE("dgd contracts the spread on a consensus-only instance") {
  ProblemInstance prob = consensus_only(6, 2);
  DirectedGraph g = erdos_renyi_digraph(6, 0.5, 77);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d(0.0, 1.0);
  BaselineConfig cfg;
  cfg.algorithm = BaselineAlgorithm::dgd;
  cfg.step_size = 0.1;  // gradient is zero; pure mixing
  cfg.max_iterations = 1;
  cfg.x0.assign(6, Vec(2));
  for (auto& x : cfg.x0)
    for (auto& v : x) v = d(rng);

  std::vector<Vec> current = cfg.x0;
  double prev_spread = spread(current);
  for (int it = 0; it < 20; ++it) {
    BaselineConfig step_cfg = cfg;
    step_cfg.x0 = current;
    BaselineRunResult r = run_baseline(prob, g, step_cfg);
    const double s = spread(r.x);
    CHECK(s <= prev_spread + 1e-12);
    prev_spread = s;
    current = r.x;
  }
  CHECK(prev_spread < spread(cfg.x0));
}

TEST_CASE("mixing override class mismatch is rejected") {
  ProblemInstance prob = identical_quadratics(3, Vec{0.0});
  DirectedGraph g = ring_digraph(3);
  // Column-stochastic but not symmetric: the equal-neighbor matrix on a ring.
  WeightMatrix bad = equal_neighbor_weights(g);
  BaselineConfig cfg;
  cfg.algorithm = BaselineAlgorithm::dgd;
  CHECK_THROWS_WITH_AS(run_baseline(prob, g, cfg, nullptr, &bad),
                       doctest::Contains("matrix-class mismatch"), std::invalid_argument);
}

TEST_CASE("the two admm baselines coincide at equal penalty") {
  // Both are the same edge-splitting scheme in different bookkeeping, so
  // equal penalties must give the same trajectory.
  ProblemInstance prob = identical_quadratics(4, Vec{0.3, 0.9});
  DirectedGraph g = erdos_renyi_digraph(4, 0.6, 10);
  BaselineConfig c1, c2;
  c1.algorithm = BaselineAlgorithm::dcoadmm;
  c2.algorithm = BaselineAlgorithm::multi_agent_admm;
  c1.step_size = c2.step_size = 0.7;
  c1.max_iterations = c2.max_iterations = 30;
  BaselineRunResult r1 = run_baseline(prob, g, c1);
  BaselineRunResult r2 = run_baseline(prob, g, c2);
  for (std::size_t i = 0; i < r1.x.size(); ++i) CHECK(dist2(r1.x[i], r2.x[i]) <= 1e-9);
}

TEST_CASE("tuning picks a convergent step") {
  ProblemInstance prob = identical_quadratics(3, Vec{2.0});
  DirectedGraph g = ring_digraph(3);
  OracleSolution oracle;
  oracle.x_star = Vec{2.0};
  oracle.f_star = 0.0;
  const double step = tune_baseline_step(prob, g, BaselineAlgorithm::dgd,
                                         {1e-3, 1e-2, 1e-1, 0.5, 5.0}, 150, oracle);
  BaselineConfig cfg;
  cfg.algorithm = BaselineAlgorithm::dgd;
  cfg.step_size = step;
  cfg.max_iterations = 400;
  BaselineRunResult r = run_baseline(prob, g, cfg);
  CHECK(dist2(r.x[0], oracle.x_star) <= 1e-5);
}

}  // TEST_SUITE
