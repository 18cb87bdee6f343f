#include "specden/eigen_sym.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "specden/common.hpp"
#include "specden/simd/kernels.hpp"

namespace specden {

void sym_tridiagonalize(double* a, int n, double* d, double* e) {
  const auto& ker = simd::active();
  std::vector<double> p(std::size_t(n), 0.0);

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double* row_i = a + std::size_t(i) * n;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(row_i[k]);
      if (scale == 0.0) {
        e[i] = row_i[l];
      } else {
        for (int k = 0; k <= l; ++k) {
          row_i[k] /= scale;
          h += row_i[k] * row_i[k];
        }
        double f = row_i[l];
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        row_i[l] = f - g;

        // p = A u in one pass over the rows of the leading block; each row
        // contributes a contiguous dot (row part) and axpy (column part).
        const double* u = row_i;
        std::fill(p.begin(), p.begin() + l + 1, 0.0);
        for (int k = 0; k <= l; ++k) {
          double* row_k = a + std::size_t(k) * n;
          p[std::size_t(k)] += ker.dot(row_k, u, std::size_t(k)) + row_k[k] * u[k];
          ker.axpy(std::size_t(k), u[k], row_k, p.data());
        }

        double f_up = 0.0;
        for (int j = 0; j <= l; ++j) {
          e[j] = p[std::size_t(j)] / h;
          f_up += e[j] * u[j];
        }
        double hh = f_up / (h + h);
        for (int j = 0; j <= l; ++j) e[j] -= hh * u[j];

        // A <- A - u q^T - q u^T on the lower triangle.
        for (int j = 0; j <= l; ++j) {
          double* row_j = a + std::size_t(j) * n;
          ker.two_axpy(std::size_t(j) + 1, -u[j], e, -e[j], u, row_j);
        }
      }
    } else {
      e[i] = row_i[l];
    }
  }
  e[0] = 0.0;
  // The (i,i) entries are untouched by the similarity transforms.
  for (int i = 0; i < n; ++i) d[i] = a[std::size_t(i) * n + i];
}

void tql_eigenvalues(double* d, double* e, int n) {
  if (n == 1) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw numerical_error("tql_eigenvalues: too many QL sweeps without deflation");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, pshift = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= pshift;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - pshift;
          r = (d[i] - g) * s + 2.0 * c * b;
          pshift = s * r;
          d[i + 1] = g + pshift;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= pshift;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

std::vector<double> sym_eigenvalues_inplace(double* a, int n) {
  std::vector<double> d(std::size_t(n), 0.0), e(std::size_t(n), 0.0);
  sym_tridiagonalize(a, n, d.data(), e.data());
  tql_eigenvalues(d.data(), e.data(), n);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace specden
