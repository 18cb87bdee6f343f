// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// the dispatcher only routes here after checking cpu support at runtime.

#include "specden/simd/kernels.hpp"

#if SPECDEN_HAVE_AVX2_TU

#include <immintrin.h>

namespace specden::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

DotPair dot_dual(const double* w, const double* a, const double* b,
                 std::size_t n) {
  __m256d sa = _mm256_setzero_pd();
  __m256d sb = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    sa = _mm256_fmadd_pd(wv, _mm256_loadu_pd(a + i), sa);
    sb = _mm256_fmadd_pd(wv, _mm256_loadu_pd(b + i), sb);
  }
  double ra = hsum(sa), rb = hsum(sb);
  for (; i < n; ++i) {
    ra += w[i] * a[i];
    rb += w[i] * b[i];
  }
  return {ra, rb};
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void two_axpy(std::size_t n, double a1, const double* x1, double a2,
              const double* x2, double* y) {
  __m256d a1v = _mm256_set1_pd(a1);
  __m256d a2v = _mm256_set1_pd(a2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(a1v, _mm256_loadu_pd(x1 + i), yv);
    yv = _mm256_fmadd_pd(a2v, _mm256_loadu_pd(x2 + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a1 * x1[i] + a2 * x2[i];
}

double pv_sum(const double* t, const double* u, std::size_t n, double s) {
  __m256d sv = _mm256_set1_pd(s);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dv = _mm256_sub_pd(sv, _mm256_loadu_pd(t + i));
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(u + i), dv));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += u[i] / (s - t[i]);
  return r;
}

double pv_sum_sub(const double* t, const double* u, std::size_t n, double s,
                  double us) {
  __m256d sv = _mm256_set1_pd(s);
  __m256d usv = _mm256_set1_pd(us);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dv = _mm256_sub_pd(sv, _mm256_loadu_pd(t + i));
    __m256d nv = _mm256_sub_pd(_mm256_loadu_pd(u + i), usv);
    acc = _mm256_add_pd(acc, _mm256_div_pd(nv, dv));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += (u[i] - us) / (s - t[i]);
  return r;
}

}  // namespace specden::simd::avx2

#endif  // SPECDEN_HAVE_AVX2_TU
