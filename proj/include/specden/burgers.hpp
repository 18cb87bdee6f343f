#pragma once

#include <vector>

#include "specden/cauchy.hpp"
#include "specden/hilbert.hpp"
#include "specden/model.hpp"

namespace specden {

// Semicircle density of given variance: sqrt(4v - s^2) / (2 pi v) on
// [-2 sqrt(v), 2 sqrt(v)], 0 outside.
double semicircle_density(double variance, double s);

enum class FlowProvenance { ClosedFormSemicircle, SolverGenerated };

// A time-indexed family of densities on a shared s-grid.
struct DensityFlow {
  std::vector<double> times;
  std::vector<double> s_grid;
  std::vector<std::vector<double>> density;  // one slice per time
  FlowProvenance provenance = FlowProvenance::SolverGenerated;
  double base_variance = 0.0;  // c for the closed-form flow
};

DensityFlow semicircle_flow(double c, const std::vector<double>& times,
                            const std::vector<double>& s_grid);
DensityFlow solver_flow(const ModelSpec& model, const std::vector<double>& times,
                        const std::vector<double>& s_grid, double smoothing_eta,
                        const SolverConfig& cfg = {}, int threads = 1);

struct ResidualTable {
  std::vector<double> s;
  std::vector<double> t;
  std::vector<double> residual;  // d_t rho + d_s (rho H[rho]) by differences
};

// Residual of the transport equation on the flow, centered differences in
// both variables. Support edges are excluded within 5 grid steps, where the
// square-root edge defeats polynomial differencing. The Hilbert transform of
// a slice is the closed form for closed-form flows and the p.v. quadrature of
// the tabulated slice otherwise.
ResidualTable burgers_residual(const DensityFlow& flow,
                               const PvQuadratureConfig& cfg = {});

// Sup-distance on interior points between the solver density of
// quantile(semicircle(c)) + constant unit profile at eps = t and the closed
// form semicircle(c + t).
double semigroup_check(double c, double t, double smoothing_eta = 1e-3,
                       const SolverConfig& cfg = {}, int threads = 1);

}  // namespace specden
