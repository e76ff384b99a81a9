#pragma once

#include <cstddef>
#include <vector>

namespace dcadmm {

using Vec = std::vector<double>;

// Row-major dense matrix. Sized for the small fixed dimensions of this
// project (p <= a few dozen); no views, no expression templates.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
};

Vec matvec(const Matrix& A, const Vec& x);            // A*x
Vec matvec_transposed(const Matrix& A, const Vec& y); // A^T*y
Matrix gram(const Matrix& A);                         // A^T*A
Matrix matmul(const Matrix& A, const Matrix& B);

// Cholesky factor (lower) of a symmetric positive definite matrix.
// Throws std::runtime_error if a pivot is not strictly positive.
struct Cholesky {
  explicit Cholesky(const Matrix& spd);
  Vec solve(const Vec& b) const;
  double min_pivot() const { return min_pivot_; }

 private:
  Matrix l_;
  double min_pivot_;
};

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double max_eigenvalue(const Matrix& sym, int iters = 200);

double norm2(const Vec& v);
double dist2(const Vec& a, const Vec& b);
double inf_norm(const Vec& v);
Vec add_scaled(const Vec& a, double alpha, const Vec& b);  // a + alpha*b
bool all_finite(const Vec& v);

}  // namespace dcadmm
