#include "specden/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specden/common.hpp"

namespace specden {

double semicircle_density(double variance, double s) {
  if (!(variance > 0.0))
    throw std::invalid_argument("semicircle_density: variance must be > 0");
  double r = 4.0 * variance - s * s;
  return r > 0.0 ? std::sqrt(r) / (2.0 * std::numbers::pi * variance) : 0.0;
}

DensityFlow semicircle_flow(double c, const std::vector<double>& times,
                            const std::vector<double>& s_grid) {
  if (!(c > 0.0)) throw std::invalid_argument("semicircle_flow: c must be > 0");
  DensityFlow flow;
  flow.times = times;
  flow.s_grid = s_grid;
  flow.provenance = FlowProvenance::ClosedFormSemicircle;
  flow.base_variance = c;
  for (double t : times) {
    std::vector<double> slice(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i)
      slice[i] = semicircle_density(c + t, s_grid[i]);
    flow.density.push_back(std::move(slice));
  }
  return flow;
}

DensityFlow solver_flow(const ModelSpec& model, const std::vector<double>& times,
                        const std::vector<double>& s_grid, double smoothing_eta,
                        const SolverConfig& cfg, int threads) {
  DensityFlow flow;
  flow.times = times;
  flow.s_grid = s_grid;
  flow.provenance = FlowProvenance::SolverGenerated;
  for (double t : times) {
    auto table = stieltjes_invert(model, t, s_grid, smoothing_eta, cfg, threads);
    flow.density.push_back(std::move(table.density));
  }
  return flow;
}

namespace {

// H[rho_t] on the s-grid for one slice.
std::vector<double> slice_hilbert(const DensityFlow& flow, std::size_t k,
                                  const PvQuadratureConfig& cfg) {
  const auto& grid = flow.s_grid;
  std::vector<double> h(grid.size(), 0.0);
  if (flow.provenance == FlowProvenance::ClosedFormSemicircle) {
    double var = flow.base_variance + flow.times[k];
    auto rho = LimitDensity::semicircle(var);
    for (std::size_t i = 0; i < grid.size(); ++i)
      h[i] = hilbert_closed_form(rho, grid[i]);
    return h;
  }
  // Tabulated slice: restrict to where the density is meaningfully positive,
  // then transform the interpolated table.
  const auto& d = flow.density[k];
  double peak = *std::max_element(d.begin(), d.end());
  if (!(peak > 0.0)) throw std::invalid_argument("burgers_residual: slice has no mass");
  PiecewiseFn u;
  u.lo = grid.front();
  u.hi = grid.back();
  UniformTable table(grid.front(), grid.back(), d);
  u.eval = [table](double t) { return table(t); };
  for (std::size_t i = 0; i < grid.size(); ++i) h[i] = hilbert_pv(u, grid[i], cfg);
  return h;
}

}  // namespace

ResidualTable burgers_residual(const DensityFlow& flow,
                               const PvQuadratureConfig& cfg) {
  const auto nt = flow.times.size();
  const auto ns = flow.s_grid.size();
  if (nt < 3)
    throw std::invalid_argument("burgers_residual: need >= 3 time slices");
  if (flow.density.size() != nt)
    throw std::invalid_argument("burgers_residual: slice count mismatch");
  for (const auto& d : flow.density)
    if (d.size() != ns)
      throw std::invalid_argument("burgers_residual: slice grid mismatch");

  const double ds = flow.s_grid[1] - flow.s_grid[0];
  if (flow.provenance == FlowProvenance::ClosedFormSemicircle) {
    double edge = 2.0 * std::sqrt(flow.base_variance + flow.times.back());
    if (flow.s_grid.front() > -edge || flow.s_grid.back() < edge)
      throw std::invalid_argument(
          "burgers_residual: s-grid does not cover the union of supports");
  }

  // Flux rho * H[rho] per slice.
  std::vector<std::vector<double>> flux(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    auto h = slice_hilbert(flow, k, cfg);
    flux[k].resize(ns);
    for (std::size_t i = 0; i < ns; ++i) flux[k][i] = flow.density[k][i] * h[i];
  }

  ResidualTable out;
  for (std::size_t k = 1; k + 1 < nt; ++k) {
    double dt2 = flow.times[k + 1] - flow.times[k - 1];
    // Margin: 5 grid steps inside the widest support seen by the stencil.
    double edge = flow.provenance == FlowProvenance::ClosedFormSemicircle
                      ? 2.0 * std::sqrt(flow.base_variance + flow.times[k + 1])
                      : HUGE_VAL;
    for (std::size_t i = 1; i + 1 < ns; ++i) {
      double s = flow.s_grid[i];
      if (std::abs(s) > edge - 5.0 * ds) continue;
      double dt_rho = (flow.density[k + 1][i] - flow.density[k - 1][i]) / dt2;
      double ds_flux = (flux[k][i + 1] - flux[k][i - 1]) / (2.0 * ds);
      out.s.push_back(s);
      out.t.push_back(flow.times[k]);
      out.residual.push_back(dt_rho + ds_flux);
    }
  }
  return out;
}

double semigroup_check(double c, double t, double smoothing_eta,
                       const SolverConfig& cfg, int threads) {
  if (!(c > 0.0 && t > 0.0))
    throw std::invalid_argument("semigroup_check: c and t must be > 0");
  ModelSpec model = semicircle_goe_model(c);
  double edge = 2.0 * std::sqrt(c + t);
  const int n = 401;
  std::vector<double> grid(n);
  // Interior points only: the smoothed solver density is biased near the
  // square-root edges at finite eta.
  double margin = 0.05 * edge;
  for (int i = 0; i < n; ++i)
    grid[std::size_t(i)] = -edge + margin + (2.0 * (edge - margin)) * i / (n - 1);
  auto table = stieltjes_invert(model, t, grid, smoothing_eta, cfg, threads);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = grid[std::size_t(i)];
    worst = std::max(worst,
                     std::abs(table.density[std::size_t(i)] - semicircle_density(c + t, s)));
  }
  return worst;
}

}  // namespace specden
