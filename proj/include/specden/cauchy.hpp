#pragma once

#include <complex>
#include <vector>

#include "specden/model.hpp"

namespace specden {

struct SolverConfig {
  int x_nodes = 512;
  double tol = 1e-10;        // sup-norm residual of the fixed-point equation
  int max_iter = 50000;
  double damping = 0.5;      // new = (1-damping)*old + damping*rhs
  bool check_invariants = true;
  bool track_residuals = false;
};

struct CauchyField {
  std::vector<double> x_grid;              // midpoints of [0,1]
  std::complex<double> z;
  double eps = 0.0;
  std::vector<std::complex<double>> values;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;    // filled when track_residuals
};

struct DensityTable {
  std::vector<double> s;
  std::vector<double> density;
  std::vector<double> cdf;
  double smoothing_eta = 0.0;
};

struct SolveDiagnostics {
  std::vector<int> iterations;
  std::vector<double> residuals;
};

// Damped Picard iteration for the self-consistent field
//   C(x,z) = 1 / (z - f(x) - eps \int sigma^2(x,y) C(y,z) dy)
// on a midpoint x-grid, started from C0(x) = 1/(z - f(x)) or `warm`.
// Both field invariants (|C| <= 1/Im z, Im C < 0) are asserted at every
// iterate when check_invariants is set. Throws numerical_error on
// non-convergence, reporting the last residual.
CauchyField solve_field(const DiagonalSymbol& f, const VarianceProfile& profile,
                        double eps, std::complex<double> z,
                        const SolverConfig& cfg = {},
                        const std::vector<std::complex<double>>* warm = nullptr);
CauchyField solve_field(const ModelSpec& model, double eps,
                        std::complex<double> z, const SolverConfig& cfg = {});

// C(z) = \int_0^1 C(x,z) dx by the midpoint rule. Requires a converged field.
std::complex<double> cauchy_transform(const CauchyField& field);

// density(s) = -Im C(s + i eta) / pi on the given grid, cdf by cumulative
// trapezoid. Consecutive solves warm-start within fixed 64-point chunks, so
// results do not depend on `threads`.
DensityTable stieltjes_invert(const DiagonalSymbol& f,
                              const VarianceProfile& profile, double eps,
                              const std::vector<double>& s_grid,
                              double smoothing_eta, const SolverConfig& cfg = {},
                              int threads = 1, SolveDiagnostics* diag = nullptr);
DensityTable stieltjes_invert(const ModelSpec& model, double eps,
                              const std::vector<double>& s_grid,
                              double smoothing_eta, const SolverConfig& cfg = {},
                              int threads = 1, SolveDiagnostics* diag = nullptr);

// Richardson-extrapolated slope of eps -> (C_eps(z) - C_0(z))/eps at 0.
// eps_list must hold >= 2 strictly decreasing positive entries.
std::complex<double> first_order_slope(const ModelSpec& model,
                                       std::complex<double> z,
                                       const std::vector<double>& eps_list,
                                       const SolverConfig& cfg = {});

}  // namespace specden
