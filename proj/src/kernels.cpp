#include "dcadmm/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <stdexcept>

namespace dcadmm::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sq_norm_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void soft_threshold_scalar(const double* v, double t, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::abs(v[i]) - t;
    out[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
  }
}

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sq_norm)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*soft_threshold)(const double*, double, double*, std::size_t);
};

constexpr Vtable kScalarVtable{dot_scalar, sq_norm_scalar, axpy_scalar, scale_scalar,
                               soft_threshold_scalar};

#if defined(DCADMM_ENABLE_AVX2)
// Provided by kernels_avx2.cpp; only entered after the runtime CPU check.
double dot_avx2(const double* a, const double* b, std::size_t n);
double sq_norm_avx2(const double* a, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scale_avx2(double alpha, double* x, std::size_t n);
void soft_threshold_avx2(const double* v, double t, double* out, std::size_t n);

constexpr Vtable kAvx2Vtable{dot_avx2, sq_norm_avx2, axpy_avx2, scale_avx2,
                             soft_threshold_avx2};

bool avx2_usable() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
constexpr Vtable kAvx2Vtable = kScalarVtable;  // never selected
bool avx2_usable() { return false; }
#endif

struct State {
  Backend backend;
  const Vtable* vt;
  State() {
    if (avx2_usable() && std::getenv("DCADMM_FORCE_SCALAR") == nullptr) {
      backend = Backend::avx2;
      vt = &kAvx2Vtable;
    } else {
      backend = Backend::scalar;
      vt = &kScalarVtable;
    }
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace detail

Backend active_backend() { return detail::state().backend; }

bool backend_available(Backend b) {
  return b == Backend::scalar || (b == Backend::avx2 && detail::avx2_usable());
}

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend not available on this CPU: " + backend_name(b));
  detail::state().backend = b;
  detail::state().vt = (b == Backend::avx2) ? &detail::kAvx2Vtable : &detail::kScalarVtable;
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
  return detail::state().vt->dot(a, b, n);
}
double sq_norm(const double* a, std::size_t n) { return detail::state().vt->sq_norm(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  detail::state().vt->axpy(alpha, x, y, n);
}
void scale(double alpha, double* x, std::size_t n) { detail::state().vt->scale(alpha, x, n); }
void soft_threshold(const double* v, double t, double* out, std::size_t n) {
  detail::state().vt->soft_threshold(v, t, out, n);
}

void matvec(const double* X, std::size_t nrow, std::size_t ncol, const double* x, double* out) {
  for (std::size_t r = 0; r < nrow; ++r) out[r] = dot(X + r * ncol, x, ncol);
}

void matvec_t(const double* X, std::size_t nrow, std::size_t ncol, const double* coef, double* y) {
  for (std::size_t r = 0; r < nrow; ++r) {
    if (coef[r] != 0.0) axpy(coef[r], X + r * ncol, y, ncol);
  }
}

}  // namespace dcadmm::kernels
