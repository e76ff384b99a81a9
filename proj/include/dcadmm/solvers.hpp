#pragma once

#include <functional>

#include "dcadmm/problem.hpp"

namespace dcadmm {

Vec soft_threshold(const Vec& v, double t);

// Projection onto {x : ||x||^2 <= r}: identity inside, radial scaling outside.
Vec project_ball(const Vec& v, double r);

// prox of t*||.||_1 + indicator{||x||^2 <= r} at v. Default solves the ball
// multiplier by bisection on the dual; the shrink-then-project composition
// is available behind two_step (the two agree for this pair).
Vec prox_l1_ball(const Vec& v, double t, double r, bool two_step = false);

// x = (A^T A + gamma I)^{-1} (A^T b + gamma y - lambda), via the objective's
// cached factorization.
Vec solve_quadratic_prox(const QuadraticObjective& obj, const Vec& y, const Vec& lambda,
                         double gamma);

struct FistaConfig {
  int max_inner_iters = 2000;
  double inner_tolerance = 1e-10;
  bool error_on_budget = true;  // false: return the last iterate instead
  bool two_step_prox = false;
};

struct FistaResult {
  Vec x;
  int iterations = 0;
  double residual = 0.0;  // proximal-gradient fixed-point residual, L*||x+ - y||
  bool converged = false;
  int restarts = 0;
  // Composite objective at the accepted iterates (restarted steps do not
  // appear); nonincreasing by construction.
  std::vector<double> objective_trace;
};

// Accelerated proximal gradient with restart on objective increase.
// smooth_value/smooth_grad describe the smooth part; prox(v, t) applies the
// nonsmooth part's prox with weight t, and nonsmooth_value evaluates that
// part at feasible points (the restart test needs the composite objective).
// L is a Lipschitz bound for the smooth gradient (step 1/L).
FistaResult fista_solve(const std::function<double(const Vec&)>& smooth_value,
                        const std::function<Vec(const Vec&)>& smooth_grad,
                        const std::function<Vec(const Vec&, double)>& prox,
                        const std::function<double(const Vec&)>& nonsmooth_value, double L,
                        Vec x0, const FistaConfig& cfg);

// The logistic agent's subproblem:
//   min loss(x) + mu||x||_1 + (gamma/2)||x - y||^2 + lambda^T (x - y)
//   s.t. x feasible,
// with L = loss_lipschitz() + gamma.
FistaResult solve_logistic_prox(const LogisticL1Objective& obj, const Constraint& constraint,
                                const Vec& y, const Vec& lambda, double gamma,
                                const FistaConfig& cfg);

// Critical l1 weight: ||grad of the unregularized total logistic loss at
// 0||_inf. Any weight above it drives the unconstrained minimizer to 0.
double mu_max(const Matrix& samples, const Vec& labels);

}  // namespace dcadmm
