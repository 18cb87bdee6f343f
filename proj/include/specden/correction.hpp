#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "specden/hilbert.hpp"
#include "specden/model.hpp"

namespace specden {

// First-order correction F(s) = -rho(s) H[tau(s,.) rho(.)](s) tabulated on a
// grid, with the density correction dF/ds by finite differences.
struct CorrectionTable {
  std::vector<double> grid;
  std::vector<double> F_values;
  std::vector<double> dF_values;
  std::vector<std::uint8_t> flags;       // 0 = ok, 1 = singular
  std::vector<double> singular_points;   // where F blows up or is non-smooth
};

// The integrand u_s(t) = tau(s,t) rho(t) with its declared breakpoints.
PiecewiseFn correction_integrand(const ModelSpec& model, double s);

// Points where s -> F(s) may be non-smooth for this model.
std::vector<double> correction_singular_points(const ModelSpec& model);

CorrectionTable correction_F(const ModelSpec& model,
                             const std::vector<double>& grid,
                             const PvQuadratureConfig& cfg = {});

enum class ClosedFormExample { UniformBand, TriangularPulseGOE };

// Exact closed forms for the two reference examples; ell is the band width
// (ignored for the triangular pulse). 0 * log 0 = 0 at the limits.
double closed_form_F(ClosedFormExample example, double ell, double s);

struct LambdaConfig {
  int nodes_per_dim = 1024;
};

struct LambdaResult {
  std::complex<double> value;
  double error_bound = 0.0;  // certified bound on the diagonal-region part
};

// Lambda(g_z) = \int\int {g(t)-g(s)-g'(s)(t-s)} tau(s,t)/(t-s)^2 rho(s)rho(t)
// for g_z(t) = 1/(z-t). The bracketed kernel equals 1/((z-t)(z-s)^2)
// identically, which is what the quadrature evaluates.
LambdaResult lambda_functional(const ModelSpec& model, std::complex<double> z,
                               const LambdaConfig& cfg = {});

// Truncated form over |s-t| > eta; converges to lambda_functional as eta->0.
std::complex<double> lambda_eta(const ModelSpec& model, std::complex<double> z,
                                double eta, const LambdaConfig& cfg = {});

// The {g(t)-g(s)} part of the Lambda integrand over |s-t| > eta; vanishes by
// symmetry, and the symmetric quadrature cancels it pairwise. Returned so
// tests can assert the cancellation explicitly.
std::complex<double> lambda_eta_symmetry_residual(const ModelSpec& model,
                                                  std::complex<double> z,
                                                  double eta,
                                                  const LambdaConfig& cfg = {});

}  // namespace specden
