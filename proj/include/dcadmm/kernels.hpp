#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dcadmm::kernels {

// Dense arithmetic primitives used by the solver and protocol inner loops.
// A scalar reference implementation always exists; wider backends are
// selected at runtime from CPU capabilities and can be forced for testing.
// Backends may differ in floating-point accumulation order, so results
// agree to rounding, not bit-for-bit.

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
void set_backend(Backend b);  // throws std::invalid_argument if unavailable
std::string backend_name(Backend b);

double dot(const double* a, const double* b, std::size_t n);
double sq_norm(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
void scale(double alpha, double* x, std::size_t n);
void soft_threshold(const double* v, double t, double* out, std::size_t n);

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return dot(a.data(), b.data(), a.size());
}
inline double sq_norm(const std::vector<double>& a) { return sq_norm(a.data(), a.size()); }
inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::vector<double>& x) { scale(alpha, x.data(), x.size()); }

// out[r] = <X[r,:], x> for row-major X of shape nrow x ncol.
void matvec(const double* X, std::size_t nrow, std::size_t ncol, const double* x, double* out);
// y += sum_r coef[r] * X[r,:].
void matvec_t(const double* X, std::size_t nrow, std::size_t ncol, const double* coef, double* y);

}  // namespace dcadmm::kernels
