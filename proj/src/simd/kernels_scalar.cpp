#include "specden/simd/kernels.hpp"

namespace specden::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc0 = 0.0, acc1 = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc0 += a[i] * b[i];
    acc1 += a[i + 1] * b[i + 1];
  }
  if (i < n) acc0 += a[i] * b[i];
  return acc0 + acc1;
}

DotPair dot_dual(const double* w, const double* a, const double* b,
                 std::size_t n) {
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += w[i] * a[i];
    sb += w[i] * b[i];
  }
  return {sa, sb};
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void two_axpy(std::size_t n, double a1, const double* x1, double a2,
              const double* x2, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a1 * x1[i] + a2 * x2[i];
}

double pv_sum(const double* t, const double* u, std::size_t n, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += u[i] / (s - t[i]);
  return acc;
}

double pv_sum_sub(const double* t, const double* u, std::size_t n, double s,
                  double us) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (u[i] - us) / (s - t[i]);
  return acc;
}

}  // namespace specden::simd::scalar
