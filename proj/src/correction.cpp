#include "specden/correction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specden/common.hpp"

namespace specden {

namespace {

void require_hypotheses(const ModelSpec& model) {
  auto rep = validate_hypotheses(model, 1000);
  for (const auto& c : rep.checks) {
    if (!c.pass && (c.name == "holder control" || c.name == "kernel symmetry"))
      throw hypothesis_error("correction_F: model fails check '" + c.name + "'");
  }
}

}  // namespace

PiecewiseFn correction_integrand(const ModelSpec& model, double s) {
  PiecewiseFn u;
  u.lo = model.rho.support_lo();
  u.hi = model.rho.support_hi();
  u.eval = [&model, s](double t) {
    return model.kernel(s, t) * model.rho.density(t);
  };
  u.breakpoints = model.kernel.t_breakpoints(s, u.lo, u.hi);
  for (double b : model.rho.breakpoints()) u.breakpoints.push_back(b);
  std::sort(u.breakpoints.begin(), u.breakpoints.end());
  u.breakpoints.erase(std::unique(u.breakpoints.begin(), u.breakpoints.end()),
                      u.breakpoints.end());
  return u;
}

std::vector<double> correction_singular_points(const ModelSpec& model) {
  double lo = model.rho.support_lo(), hi = model.rho.support_hi();
  std::vector<double> pts{lo, hi};
  for (double b : model.rho.breakpoints()) pts.push_back(b);
  for (double b : model.kernel.s_breakpoints(lo, hi, model.rho.breakpoints()))
    pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double a, double b) {
                          return std::abs(a - b) < 1e-12 * (hi - lo);
                        }),
            pts.end());
  return pts;
}

CorrectionTable correction_F(const ModelSpec& model,
                             const std::vector<double>& grid,
                             const PvQuadratureConfig& cfg) {
  if (grid.size() < 3) throw std::invalid_argument("correction_F: grid too small");
  double lo = model.rho.support_lo(), hi = model.rho.support_hi();
  double h = grid[1] - grid[0];
  if (grid.front() > lo + h || grid.back() < hi - h)
    throw std::invalid_argument("correction_F: grid does not cover supp rho");
  require_hypotheses(model);

  const double width = hi - lo;
  const double eta = cfg.exclusion_eta > 0.0 ? cfg.exclusion_eta : 1e-3 * width;
  if (!(eta < model.kernel.eta0()))
    throw std::invalid_argument("correction_F: exclusion_eta must be below the kernel's eta0");

  CorrectionTable out;
  out.grid = grid;
  out.singular_points = correction_singular_points(model);
  const std::size_t n = grid.size();
  out.F_values.assign(n, 0.0);
  out.dF_values.assign(n, 0.0);
  out.flags.assign(n, 0);

  auto near_singular = [&](double s) {
    for (double p : out.singular_points)
      if (std::abs(s - p) <= eta) return true;
    return false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    double s = grid[i];
    if (s <= lo || s >= hi) continue;  // F is compactly supported
    if (near_singular(s)) out.flags[i] = 1;
    double rho_s = model.rho.density(s);
    if (rho_s == 0.0) continue;
    PiecewiseFn u = correction_integrand(model, s);
    // A kink of u at s is fine for the subtracted quadrature; an actual jump
    // at s is not, and such points are reported as singular with F from the
    // one-sided-limit side left untouched at 0 only if evaluation fails.
    double delta = 1e-9 * width;
    bool jump_at_s = false;
    for (double b : u.breakpoints) {
      if (std::abs(b - s) < 1e-14 * width) {
        double left = u.eval(s - delta), right = u.eval(s + delta);
        if (std::abs(left - right) > 1e-6 * (1.0 + model.kernel.bound())) {
          jump_at_s = true;
        } else {
          // Kink only: drop the coincident breakpoint, s splits pieces anyway.
          u.breakpoints.erase(
              std::remove_if(u.breakpoints.begin(), u.breakpoints.end(),
                             [&](double x) { return std::abs(x - s) < 1e-14 * width; }),
              u.breakpoints.end());
        }
        break;
      }
    }
    if (jump_at_s) {
      out.flags[i] = 1;
      continue;
    }
    out.F_values[i] = -rho_s * hilbert_pv(u, s, cfg);
  }

  // dF by finite differences: centered where both neighbors are regular,
  // one-sided next to flagged points and at the ends.
  for (std::size_t i = 0; i < n; ++i) {
    double hi_step = i + 1 < n ? grid[i + 1] - grid[i] : 0.0;
    double lo_step = i > 0 ? grid[i] - grid[i - 1] : 0.0;
    bool can_up = i + 1 < n && !out.flags[i + 1];
    bool can_down = i > 0 && !out.flags[i - 1];
    if (can_up && can_down) {
      out.dF_values[i] =
          (out.F_values[i + 1] - out.F_values[i - 1]) / (hi_step + lo_step);
    } else if (can_up) {
      out.dF_values[i] = (out.F_values[i + 1] - out.F_values[i]) / hi_step;
    } else if (can_down) {
      out.dF_values[i] = (out.F_values[i] - out.F_values[i - 1]) / lo_step;
    } else {
      out.dF_values[i] = 0.0;
    }
  }
  return out;
}

double closed_form_F(ClosedFormExample example, double ell, double s) {
  switch (example) {
    case ClosedFormExample::UniformBand: {
      if (!(ell > 0.0 && ell <= 1.0))
        throw std::invalid_argument("closed_form_F: ell must be in (0,1]");
      if (s <= 0.0 || s >= 1.0) return 0.0;
      return std::log(std::min(ell, 1.0 - s) / std::min(ell, s));
    }
    case ClosedFormExample::TriangularPulseGOE: {
      if (s <= -1.0 || s >= 1.0) return 0.0;
      auto xlogabs = [](double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); };
      double bracket = xlogabs(1.0 - s) - xlogabs(1.0 + s) + 2.0 * xlogabs(s);
      return (1.0 - std::abs(s)) * bracket;
    }
  }
  return 0.0;
}

namespace {

struct QuadGrid {
  std::vector<double> s;     // midpoint nodes over supp rho
  std::vector<double> rho;   // density at nodes
  double h;
};

QuadGrid make_grid(const ModelSpec& model, int nodes) {
  double lo = model.rho.support_lo(), hi = model.rho.support_hi();
  QuadGrid g;
  g.h = (hi - lo) / nodes;
  g.s.resize(std::size_t(nodes));
  g.rho.resize(std::size_t(nodes));
  for (int i = 0; i < nodes; ++i) {
    g.s[std::size_t(i)] = lo + (i + 0.5) * g.h;
    g.rho[std::size_t(i)] = model.rho.density(g.s[std::size_t(i)]);
  }
  return g;
}

}  // namespace

LambdaResult lambda_functional(const ModelSpec& model, std::complex<double> z,
                               const LambdaConfig& cfg) {
  if (!(z.imag() > 0.0))
    throw std::invalid_argument("lambda_functional: Im z must be > 0");
  auto g = make_grid(model, cfg.nodes_per_dim);
  const auto n = g.s.size();
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.rho[i] == 0.0) continue;
    std::complex<double> zs = z - g.s[i];
    std::complex<double> ws = 1.0 / (zs * zs);
    std::complex<double> row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (g.rho[j] == 0.0) continue;
      row += model.kernel(g.s[i], g.s[j]) * g.rho[j] / (z - g.s[j]);
    }
    acc += ws * row * g.rho[i];
  }
  LambdaResult res;
  res.value = acc * g.h * g.h;
  // Certified magnitude of the |s-t| <= h strip, from the Taylor-Lagrange
  // bound |integrand| <= rho rho ||tau|| ||g''|| / 2 with ||g''|| = 2/(Im z)^3.
  double gpp = 2.0 / std::pow(z.imag(), 3);
  double strip = 0.0;
  for (std::size_t i = 0; i < n; ++i) strip += g.rho[i] * g.rho[i] * g.h;
  res.error_bound = strip * 2.0 * g.h * model.kernel.bound() * gpp / 2.0;
  return res;
}

std::complex<double> lambda_eta(const ModelSpec& model, std::complex<double> z,
                                double eta, const LambdaConfig& cfg) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("lambda_eta: Im z must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("lambda_eta: eta must be > 0");
  auto g = make_grid(model, cfg.nodes_per_dim);
  const auto n = g.s.size();
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.rho[i] == 0.0) continue;
    std::complex<double> zs = z - g.s[i];
    std::complex<double> gp = 1.0 / (zs * zs);
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double d = g.s[i] - g.s[j];
      if (std::abs(d) <= eta || g.rho[j] == 0.0) continue;
      row += model.kernel(g.s[i], g.s[j]) * g.rho[j] / d;
    }
    acc += gp * row * g.rho[i];
  }
  return acc * g.h * g.h;
}

std::complex<double> lambda_eta_symmetry_residual(const ModelSpec& model,
                                                  std::complex<double> z,
                                                  double eta,
                                                  const LambdaConfig& cfg) {
  if (!(z.imag() > 0.0))
    throw std::invalid_argument("lambda_eta_symmetry_residual: Im z must be > 0");
  auto g = make_grid(model, cfg.nodes_per_dim);
  const auto n = g.s.size();
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double d = g.s[j] - g.s[i];
      if (std::abs(d) <= eta) continue;
      // {g(t)-g(s)} tau/(t-s)^2 rho rho with g(t)-g(s) = (t-s)/((z-t)(z-s)).
      std::complex<double> v = 1.0 / ((z - g.s[j]) * (z - g.s[i]) * d);
      acc += v * model.kernel(g.s[i], g.s[j]) * g.rho[i] * g.rho[j];
    }
  }
  return acc * g.h * g.h;
}

}  // namespace specden
