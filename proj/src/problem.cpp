#include "dcadmm/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dcadmm/kernels.hpp"

namespace dcadmm {

double EpsSchedule::eps(long k) const {
  if (k < 1) throw std::invalid_argument("EpsSchedule: k starts at 1");
  switch (kind) {
    case Kind::constant:
      return c;
    case Kind::inv_k:
      return c / static_cast<double>(k);
    case Kind::inv_k_squared:
      return c / (static_cast<double>(k) * static_cast<double>(k));
  }
  return c;
}

std::string EpsSchedule::name() const {
  switch (kind) {
    case Kind::constant:
      return "constant";
    case Kind::inv_k:
      return "1/k";
    case Kind::inv_k_squared:
      return "1/k^2";
  }
  return "constant";
}

EpsSchedule EpsSchedule::parse(const std::string& kind_name, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("EpsSchedule: c must be positive");
  EpsSchedule s;
  s.c = c;
  if (kind_name == "constant")
    s.kind = Kind::constant;
  else if (kind_name == "1/k" || kind_name == "inv_k")
    s.kind = Kind::inv_k;
  else if (kind_name == "1/k^2" || kind_name == "inv_k_squared" || kind_name == "1/k2")
    s.kind = Kind::inv_k_squared;
  else
    throw std::invalid_argument("EpsSchedule: unknown kind '" + kind_name + "'");
  return s;
}

Vec project(const Constraint& c, Vec x) {
  if (std::holds_alternative<NoConstraint>(c)) return x;
  if (const auto* ball = std::get_if<BallConstraint>(&c)) {
    const double sq = kernels::sq_norm(x.data(), x.size());
    if (sq > ball->radius_sq) kernels::scale(std::sqrt(ball->radius_sq / sq), x);
    return x;
  }
  const auto& box = std::get<BoxConstraint>(c);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box.lo[i], box.hi[i]);
  return x;
}

bool contains(const Constraint& c, const Vec& x, double tol) {
  if (std::holds_alternative<NoConstraint>(c)) return true;
  if (const auto* ball = std::get_if<BallConstraint>(&c))
    return kernels::sq_norm(x.data(), x.size()) <= ball->radius_sq + tol;
  const auto& box = std::get<BoxConstraint>(c);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < box.lo[i] - tol || x[i] > box.hi[i] + tol) return false;
  return true;
}

QuadraticObjective::QuadraticObjective(Matrix A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  if (b_.size() != A_.rows) throw std::invalid_argument("QuadraticObjective: A/b shape mismatch");
  gram_ = dcadmm::gram(A_);
  atb_ = matvec_transposed(A_, b_);
}

double QuadraticObjective::value(const Vec& x) const {
  Vec r = matvec(A_, x);
  kernels::axpy(-1.0, b_, r);
  return 0.5 * kernels::sq_norm(r.data(), r.size());
}

Vec QuadraticObjective::grad(const Vec& x) const {
  Vec r = matvec(A_, x);
  kernels::axpy(-1.0, b_, r);
  return matvec_transposed(A_, r);
}

const Cholesky& QuadraticObjective::shifted_factor(double gamma) const {
  if (!cache_ || cache_->first != gamma) {
    Matrix shifted = gram_;
    for (std::size_t i = 0; i < shifted.rows; ++i) shifted(i, i) += gamma;
    cache_.emplace(gamma, Cholesky(shifted));
  }
  return cache_->second;
}

double QuadraticObjective::gram_max_eigenvalue() const {
  if (!gram_max_eig_) gram_max_eig_ = max_eigenvalue(gram_);
  return *gram_max_eig_;
}

LogisticL1Objective::LogisticL1Objective(Matrix samples, Vec labels, double mu)
    : samples_(std::move(samples)), labels_(std::move(labels)), mu_(mu) {
  if (labels_.size() != samples_.rows)
    throw std::invalid_argument("LogisticL1Objective: samples/labels mismatch");
  for (double y : labels_)
    if (y != 1.0 && y != -1.0)
      throw std::invalid_argument("LogisticL1Objective: labels must be -1 or +1");
  if (mu_ < 0.0) throw std::invalid_argument("LogisticL1Objective: mu must be >= 0");
  lipschitz_ = max_eigenvalue(dcadmm::gram(samples_)) / 4.0;
}

double LogisticL1Objective::loss_value(const Vec& x) const {
  const std::size_t m = samples_.rows;
  Vec margins(m);
  kernels::matvec(samples_.data.data(), m, samples_.cols, x.data(), margins.data());
  double loss = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double z = labels_[j] * margins[j];
    // log(1 + exp(-z)) without overflow on either tail
    loss += z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  }
  return loss;
}

Vec LogisticL1Objective::loss_grad(const Vec& x) const {
  const std::size_t m = samples_.rows;
  Vec margins(m);
  kernels::matvec(samples_.data.data(), m, samples_.cols, x.data(), margins.data());
  Vec coef(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double z = labels_[j] * margins[j];
    const double sig = z > 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
    coef[j] = -labels_[j] * sig;  // -y * sigma(-y a^T x)
  }
  Vec g(samples_.cols, 0.0);
  kernels::matvec_t(samples_.data.data(), m, samples_.cols, coef.data(), g.data());
  return g;
}

double objective_value(const AgentProblem& agent, const Vec& x) {
  if (std::holds_alternative<ZeroObjective>(agent.objective)) return 0.0;
  if (const auto* q = std::get_if<QuadraticObjective>(&agent.objective)) return q->value(x);
  const auto& l = std::get<LogisticL1Objective>(agent.objective);
  double l1 = 0.0;
  for (double xi : x) l1 += std::abs(xi);
  return l.loss_value(x) + l.mu() * l1;
}

void ProblemInstance::validate() const {
  if (dimension < 1) throw std::invalid_argument("ProblemInstance: dimension must be >= 1");
  if (agents.empty()) throw std::invalid_argument("ProblemInstance: no agents");
  if (!(gamma > 0.0)) throw std::invalid_argument("ProblemInstance: gamma must be positive");
  for (const auto& a : agents) {
    if (const auto* q = std::get_if<QuadraticObjective>(&a.objective)) {
      if (q->A().cols != static_cast<std::size_t>(dimension))
        throw std::invalid_argument("ProblemInstance: quadratic dimension mismatch");
    } else if (const auto* l = std::get_if<LogisticL1Objective>(&a.objective)) {
      if (l->samples().cols != static_cast<std::size_t>(dimension))
        throw std::invalid_argument("ProblemInstance: logistic dimension mismatch");
    }
    if (const auto* ball = std::get_if<BallConstraint>(&a.constraint)) {
      if (!(ball->radius_sq > 0.0))
        throw std::invalid_argument("ProblemInstance: ball radius must be positive");
    } else if (const auto* box = std::get_if<BoxConstraint>(&a.constraint)) {
      if (box->lo.size() != static_cast<std::size_t>(dimension) ||
          box->hi.size() != static_cast<std::size_t>(dimension))
        throw std::invalid_argument("ProblemInstance: box dimension mismatch");
      for (std::size_t i = 0; i < box->lo.size(); ++i)
        if (box->lo[i] > box->hi[i])
          throw std::invalid_argument("ProblemInstance: empty box");
    }
  }
}

double ProblemInstance::total_objective(const std::vector<Vec>& xs) const {
  double f = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) f += objective_value(agents[i], xs[i]);
  return f;
}

double ProblemInstance::total_objective_common(const Vec& x) const {
  double f = 0.0;
  for (const auto& a : agents) f += objective_value(a, x);
  return f;
}

}  // namespace dcadmm
