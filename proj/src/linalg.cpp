#include "dcadmm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dcadmm/kernels.hpp"

namespace dcadmm {

Vec matvec(const Matrix& A, const Vec& x) {
  if (x.size() != A.cols) throw std::invalid_argument("matvec: dimension mismatch");
  Vec out(A.rows);
  kernels::matvec(A.data.data(), A.rows, A.cols, x.data(), out.data());
  return out;
}

Vec matvec_transposed(const Matrix& A, const Vec& y) {
  if (y.size() != A.rows) throw std::invalid_argument("matvec_transposed: dimension mismatch");
  Vec out(A.cols, 0.0);
  kernels::matvec_t(A.data.data(), A.rows, A.cols, y.data(), out.data());
  return out;
}

Matrix gram(const Matrix& A) {
  Matrix g(A.cols, A.cols);
  // Rank-1 accumulation over rows; symmetric fill afterwards.
  for (std::size_t r = 0; r < A.rows; ++r) {
    const double* a = A.row(r);
    for (std::size_t i = 0; i < A.cols; ++i) {
      if (a[i] != 0.0) kernels::axpy(a[i], a, g.row(i), A.cols);
    }
  }
  return g;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix c(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      const double a = A(i, k);
      if (a != 0.0) kernels::axpy(a, B.row(k), c.row(i), B.cols);
    }
  return c;
}

Cholesky::Cholesky(const Matrix& spd) : l_(spd.rows, spd.cols), min_pivot_(0.0) {
  if (spd.rows != spd.cols) throw std::invalid_argument("Cholesky: matrix not square");
  const std::size_t n = spd.rows;
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j) - kernels::dot(l_.row(j), l_.row(j), j);
    if (d <= 0.0) throw std::runtime_error("Cholesky: matrix not positive definite");
    min_pivot_ = std::min(min_pivot_, d);
    l_(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j) - kernels::dot(l_.row(i), l_.row(j), j);
      l_(i, j) = s / l_(j, j);
    }
  }
}

Vec Cholesky::solve(const Vec& b) const {
  const std::size_t n = l_.rows;
  if (b.size() != n) throw std::invalid_argument("Cholesky::solve: dimension mismatch");
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = (b[i] - kernels::dot(l_.row(i), y.data(), i)) / l_(i, i);
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= l_(j, ii) * x[j];
    x[ii] = s / l_(ii, ii);
  }
  return x;
}

double max_eigenvalue(const Matrix& sym, int iters) {
  const std::size_t n = sym.rows;
  Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = matvec(sym, v);
    double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    kernels::scale(1.0 / nw, w);
    lambda = kernels::dot(w, matvec(sym, w));
    v = std::move(w);
  }
  return lambda;
}

double norm2(const Vec& v) { return std::sqrt(kernels::sq_norm(v.data(), v.size())); }

double dist2(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec add_scaled(const Vec& a, double alpha, const Vec& b) {
  Vec out = a;
  kernels::axpy(alpha, b, out);
  return out;
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace dcadmm
