#pragma once

#include <functional>
#include <vector>

#include "specden/model.hpp"

namespace specden {

// Principal-value quadrature settings. exclusion_eta < 0 means
// 1e-3 * support width, resolved per call.
struct PvQuadratureConfig {
  double exclusion_eta = -1.0;
  int nodes_per_unit = 8192;
  bool use_singularity_subtraction = true;
};

// An integrable function with compact support [lo, hi] and declared interior
// jump/kink locations. Quadrature panels never straddle a breakpoint.
struct PiecewiseFn {
  std::function<double(double)> eval;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> breakpoints;  // sorted, strictly inside (lo, hi)
};

// H[u](s) = p.v. \int u(t)/(s-t) dt.
//
// With subtraction enabled (default) and s inside the support, the constant
// part is integrated analytically: the quadrature sees the bounded integrand
// (u(t)-u(s))/(s-t) plus u(s) * log((s-lo)/(hi-s)). With subtraction
// disabled, the window |t-s| <= exclusion_eta is dropped (truncated p.v.).
double hilbert_pv(const PiecewiseFn& u, double s, const PvQuadratureConfig& cfg = {});

// Truncated transform of the model's diagonal-weighted kernel:
// theta_eta(s) = rho(s) \int_{|s-t|>eta} tau(s,t) rho(t) / (s-t) dt,
// over t in [s-2M, s+2M]. Tends to -F(s) as eta -> 0.
double theta_eta(const ModelSpec& model, double s, double eta,
                 const PvQuadratureConfig& cfg = {});

// Analytic Hilbert transforms of the reference densities
// (Uniform01, Semicircle, TriangularPulse). Throws for Tabulated.
double hilbert_closed_form(const LimitDensity& rho, double s);

}  // namespace specden
