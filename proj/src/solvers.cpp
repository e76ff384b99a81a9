#include "dcadmm/solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dcadmm/kernels.hpp"

namespace dcadmm {

Vec soft_threshold(const Vec& v, double t) {
  if (t < 0.0) throw std::invalid_argument("soft_threshold: t must be >= 0");
  Vec out(v.size());
  kernels::soft_threshold(v.data(), t, out.data(), v.size());
  return out;
}

Vec project_ball(const Vec& v, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("project_ball: r must be positive");
  Vec out = v;
  const double sq = kernels::sq_norm(out.data(), out.size());
  if (sq > r) kernels::scale(std::sqrt(r / sq), out);
  return out;
}

Vec prox_l1_ball(const Vec& v, double t, double r, bool two_step) {
  Vec s = soft_threshold(v, t);
  const double sq = kernels::sq_norm(s.data(), s.size());
  if (sq <= r) return s;
  if (two_step) return project_ball(s, r);
  // Active ball: the KKT point is s/(1+nu) with ||s||^2/(1+nu)^2 = r.
  // phi(nu) = ||s||^2/(1+nu)^2 - r is decreasing; bracket the root and bisect.
  double lo = 0.0;
  double hi = 1.0;
  auto phi = [&](double nu) {
    const double denom = 1.0 + nu;
    return sq / (denom * denom) - r;
  };
  while (phi(hi) > 0.0) hi *= 2.0;
  while (hi - lo > 1e-12 * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  const double nu = 0.5 * (lo + hi);
  kernels::scale(1.0 / (1.0 + nu), s);
  return s;
}

Vec solve_quadratic_prox(const QuadraticObjective& obj, const Vec& y, const Vec& lambda,
                         double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("solve_quadratic_prox: gamma must be positive");
  if (!all_finite(y) || !all_finite(lambda))
    throw std::invalid_argument("solve_quadratic_prox: non-finite input");
  Vec rhs = obj.atb();
  kernels::axpy(gamma, y, rhs);
  kernels::axpy(-1.0, lambda, rhs);
  return obj.shifted_factor(gamma).solve(rhs);
}

FistaResult fista_solve(const std::function<double(const Vec&)>& smooth_value,
                        const std::function<Vec(const Vec&)>& smooth_grad,
                        const std::function<Vec(const Vec&, double)>& prox,
                        const std::function<double(const Vec&)>& nonsmooth_value, double L,
                        Vec x0, const FistaConfig& cfg) {
  if (!(L > 0.0)) throw std::invalid_argument("fista_solve: L must be positive");
  if (cfg.max_inner_iters < 1 || !(cfg.inner_tolerance > 0.0))
    throw std::invalid_argument("fista_solve: invalid config");

  const double step = 1.0 / L;
  Vec x = prox(x0, 0.0);  // start feasible
  Vec y = x;
  double t = 1.0;
  double fx = smooth_value(x) + nonsmooth_value(x);

  FistaResult res;
  res.objective_trace.push_back(fx);
  for (int it = 1; it <= cfg.max_inner_iters; ++it) {
    Vec g = smooth_grad(y);
    Vec z = y;
    kernels::axpy(-step, g, z);
    Vec x_next = prox(z, step);

    res.iterations = it;
    res.residual = L * dist2(x_next, y);
    const double fx_next = smooth_value(x_next) + nonsmooth_value(x_next);

    // Converged? Decide before the restart guard: at the fixed point the
    // objective comparison is pure rounding noise and would restart forever.
    if (res.residual <= cfg.inner_tolerance) {
      if (fx_next <= fx) x = std::move(x_next);
      res.converged = true;
      break;
    }

    // Increases inside evaluation rounding are ties, not overshoots;
    // restarting on them loops forever at the fixed point.
    const double noise =
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fx));
    if (fx_next > fx + noise) {
      // Momentum overshoot: restart from the last accepted point. The next
      // step is then plain proximal gradient, which cannot increase.
      ++res.restarts;
      t = 1.0;
      y = x;
      continue;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next;
    const double beta = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += beta * (x_next[i] - x[i]);
    x = std::move(x_next);
    fx = fx_next;
    t = t_next;
    res.objective_trace.push_back(fx);
  }

  res.x = std::move(x);
  if (!res.converged && cfg.error_on_budget)
    throw std::runtime_error("fista_solve: inner budget exhausted, residual " +
                             std::to_string(res.residual));
  return res;
}

FistaResult solve_logistic_prox(const LogisticL1Objective& obj, const Constraint& constraint,
                                const Vec& y, const Vec& lambda, double gamma,
                                const FistaConfig& cfg) {
  const double L = obj.loss_lipschitz() + gamma;

  auto smooth_value = [&](const Vec& x) {
    double v = obj.loss_value(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - y[i];
      v += 0.5 * gamma * d * d + lambda[i] * d;
    }
    return v;
  };
  auto smooth_grad = [&](const Vec& x) {
    Vec g = obj.loss_grad(x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += gamma * (x[i] - y[i]) + lambda[i];
    return g;
  };
  auto prox = [&](const Vec& v, double step) -> Vec {
    const double t = obj.mu() * step;
    if (const auto* ball = std::get_if<BallConstraint>(&constraint))
      return prox_l1_ball(v, t, ball->radius_sq, cfg.two_step_prox);
    Vec s = t > 0.0 ? soft_threshold(v, t) : v;
    return project(constraint, std::move(s));
  };
  auto nonsmooth_value = [&](const Vec& x) {
    double l1 = 0.0;
    for (double c : x) l1 += std::abs(c);
    return obj.mu() * l1;
  };

  return fista_solve(smooth_value, smooth_grad, prox, nonsmooth_value, L, y, cfg);
}

double mu_max(const Matrix& samples, const Vec& labels) {
  if (samples.rows == 0) throw std::invalid_argument("mu_max: no data");
  // Gradient of the total logistic loss at x = 0 is -(1/2) sum_j y_j a_j.
  Vec g(samples.cols, 0.0);
  for (std::size_t j = 0; j < samples.rows; ++j)
    kernels::axpy(-0.5 * labels[j], samples.row(j), g.data(), samples.cols);
  return inf_norm(g);
}

}  // namespace dcadmm
