#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the solver, the quadrature code and the
// eigensolver. Every kernel has a scalar reference implementation and, on
// x86-64, an AVX2+FMA variant compiled in a separate translation unit.
// The active set is picked once at runtime from CPU capabilities; tests
// check the variants against each other on randomized inputs.

namespace specden::simd {

struct DotPair {
  double first;
  double second;
};

struct Kernels {
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // (sum_i w[i]*a[i], sum_i w[i]*b[i]) -- one pass over w
  DotPair (*dot_dual)(const double* w, const double* a, const double* b,
                      std::size_t n);
  // y[i] += alpha*x[i]
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  // y[i] += a1*x1[i] + a2*x2[i]
  void (*two_axpy)(std::size_t n, double a1, const double* x1, double a2,
                   const double* x2, double* y);
  // sum_i u[i] / (s - t[i])
  double (*pv_sum)(const double* t, const double* u, std::size_t n, double s);
  // sum_i (u[i] - us) / (s - t[i])
  double (*pv_sum_sub)(const double* t, const double* u, std::size_t n,
                       double s, double us);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
DotPair dot_dual(const double* w, const double* a, const double* b,
                 std::size_t n);
void axpy(std::size_t n, double alpha, const double* x, double* y);
void two_axpy(std::size_t n, double a1, const double* x1, double a2,
              const double* x2, double* y);
double pv_sum(const double* t, const double* u, std::size_t n, double s);
double pv_sum_sub(const double* t, const double* u, std::size_t n, double s,
                  double us);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SPECDEN_HAVE_AVX2_TU 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
DotPair dot_dual(const double* w, const double* a, const double* b,
                 std::size_t n);
void axpy(std::size_t n, double alpha, const double* x, double* y);
void two_axpy(std::size_t n, double a1, const double* x1, double a2,
              const double* x2, double* y);
double pv_sum(const double* t, const double* u, std::size_t n, double s);
double pv_sum_sub(const double* t, const double* u, std::size_t n, double s,
                  double us);
}  // namespace avx2
#else
#define SPECDEN_HAVE_AVX2_TU 0
#endif

// Dispatched kernel set. Honors SPECDEN_SIMD=scalar|avx2 (env) on first use.
const Kernels& active();
std::string_view active_backend();

}  // namespace specden::simd
