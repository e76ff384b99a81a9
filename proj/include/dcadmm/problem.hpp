#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcadmm/linalg.hpp"

namespace dcadmm {

// Consensus tolerance sequence eps_k for k >= 1: c, c/k, or c/k^2. Only the
// 1/k^2 schedule is summable; the others are kept as valid configurations
// with the summability recorded as metadata.
struct EpsSchedule {
  enum class Kind { constant, inv_k, inv_k_squared };
  Kind kind = Kind::constant;
  double c = 0.01;

  double eps(long k) const;
  bool summable() const { return kind == Kind::inv_k_squared; }
  std::string name() const;
  static EpsSchedule parse(const std::string& kind_name, double c);
};

struct NoConstraint {};
// Feasible set {x : ||x||^2 <= radius_sq} (the bound is on the squared norm).
struct BallConstraint {
  double radius_sq;
};
struct BoxConstraint {
  Vec lo, hi;
};
using Constraint = std::variant<NoConstraint, BallConstraint, BoxConstraint>;

Vec project(const Constraint& c, Vec x);
bool contains(const Constraint& c, const Vec& x, double tol = 1e-9);

struct ZeroObjective {};

// f(x) = (1/2)||A x - b||^2 with a cached Cholesky of (A^T A + gamma I).
class QuadraticObjective {
 public:
  QuadraticObjective(Matrix A, Vec b);

  const Matrix& A() const { return A_; }
  const Vec& b() const { return b_; }
  const Matrix& gram() const { return gram_; }
  const Vec& atb() const { return atb_; }

  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;

  // Factor of (A^T A + gamma I); rebuilt only when gamma changes.
  const Cholesky& shifted_factor(double gamma) const;
  double gram_max_eigenvalue() const;

 private:
  Matrix A_;
  Vec b_;
  Matrix gram_;
  Vec atb_;
  mutable std::optional<std::pair<double, Cholesky>> cache_;
  mutable std::optional<double> gram_max_eig_;
};

// Smooth part of sum_j log(1 + exp(-y_j a_j^T x)) plus an l1 share mu; the
// l1 term and any constraint are handled by the prox, not here.
class LogisticL1Objective {
 public:
  // labels must be -1 or +1; mu >= 0.
  LogisticL1Objective(Matrix samples, Vec labels, double mu);

  const Matrix& samples() const { return samples_; }
  const Vec& labels() const { return labels_; }
  double mu() const { return mu_; }

  double loss_value(const Vec& x) const;
  Vec loss_grad(const Vec& x) const;
  // ||sum_j a_j a_j^T||_2 / 4, the Lipschitz bound of the plain loss gradient.
  double loss_lipschitz() const { return lipschitz_; }

 private:
  Matrix samples_;
  Vec labels_;
  double mu_;
  double lipschitz_;
};

using Objective = std::variant<ZeroObjective, QuadraticObjective, LogisticL1Objective>;

struct AgentProblem {
  Objective objective;
  Constraint constraint;
};

// f~_i(x) + l1 share, without the constraint indicator.
double objective_value(const AgentProblem& agent, const Vec& x);

struct ProblemInstance {
  int dimension = 0;
  std::vector<AgentProblem> agents;
  double gamma = 1.0;
  EpsSchedule schedule;

  int n_agents() const { return static_cast<int>(agents.size()); }
  void validate() const;  // gamma > 0, uniform sizes, label values, ...

  double total_objective(const std::vector<Vec>& xs) const;
  double total_objective_common(const Vec& x) const;
};

struct OracleSolution {
  Vec x_star;
  double f_star = 0.0;
  std::string method;
  double kkt_residual = 0.0;
};

}  // namespace dcadmm
