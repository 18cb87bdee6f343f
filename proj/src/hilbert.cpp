#include "specden/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specden/common.hpp"
#include "specden/simd/kernels.hpp"

namespace specden {

namespace {

struct Panel {
  double a, b;
};

// Split [a, b] into panels graded geometrically toward both ends, so that
// square-root edge behavior and the subtracted singularity at a piece
// boundary are resolved without a global node-count blowup.
void graded_panels(double a, double b, std::vector<Panel>& out) {
  double w = b - a;
  if (!(w > 0.0)) return;
  // Keep every quadrature node a safe number of ulps away from the piece
  // endpoints (one of which may be the p.v. point s).
  const double ulp =
      0x1p-52 * std::max({std::abs(a), std::abs(b), 1.0});
  if (w <= 64.0 * ulp) return;  // sub-resolution piece, negligible mass
  const double wmin = std::max({w * 0x1p-44, 512.0 * ulp, 1e-300});
  // [a, a+w/2] refined toward a, then [a+w/2, b] refined toward b.
  std::vector<Panel> tail;
  double q = 0.5 * w;
  while (q > wmin) {
    tail.push_back({a + 0.5 * q, a + q});
    q *= 0.5;
  }
  tail.push_back({a, a + q});
  out.insert(out.end(), tail.rbegin(), tail.rend());
  tail.clear();
  q = 0.5 * w;
  while (q > wmin) {
    tail.push_back({b - q, b - 0.5 * q});
    q *= 0.5;
  }
  tail.push_back({b - q, b});
  out.insert(out.end(), tail.begin(), tail.end());
}

// Piece boundaries for u restricted to [lo, hi], split at breakpoints and at
// the extra points (already clipped by caller).
std::vector<double> piece_edges(const PiecewiseFn& u, double lo, double hi,
                                const std::vector<double>& extra) {
  std::vector<double> edges{lo, hi};
  for (double b : u.breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  for (double e : extra)
    if (e > lo && e < hi) edges.push_back(e);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

class PanelSum {
 public:
  PanelSum(const PiecewiseFn& u, int nodes_per_unit)
      : u_(u), nodes_per_unit_(nodes_per_unit) {}

  // Adds the midpoint-rule contribution of \int_panel u(t)/(s-t) dt,
  // optionally with u(s) subtracted from the numerator.
  void accumulate(const Panel& p, double s, bool subtract, double us) {
    double w = p.b - p.a;
    // The floor of 16 keeps the graded tail panels accurate where the
    // integrand curvature is at its scale (truncation edges, sqrt edges).
    auto m = std::size_t(std::clamp(std::ceil(w * nodes_per_unit_), 16.0, 4e6));
    double h = w / double(m);
    t_.resize(m);
    v_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      double t = p.a + (double(i) + 0.5) * h;
      t_[i] = t;
      double val = u_.eval(t);
      if (!std::isfinite(val)) throw numerical_error("hilbert_pv: non-finite integrand value");
      v_[i] = val;
    }
    const auto& k = simd::active();
    double part = subtract ? k.pv_sum_sub(t_.data(), v_.data(), m, s, us)
                           : k.pv_sum(t_.data(), v_.data(), m, s);
    sum_ += part * h;
  }

  double total() const { return sum_; }

 private:
  const PiecewiseFn& u_;
  double nodes_per_unit_;
  double sum_ = 0.0;
  std::vector<double> t_, v_;
};

}  // namespace

double hilbert_pv(const PiecewiseFn& u, double s, const PvQuadratureConfig& cfg) {
  if (!(u.hi > u.lo)) throw std::invalid_argument("hilbert_pv: empty support");
  const double width = u.hi - u.lo;
  const double eta =
      cfg.exclusion_eta > 0.0 ? cfg.exclusion_eta : 1e-3 * width;

  const bool inside = s > u.lo && s < u.hi;
  PanelSum acc(u, cfg.nodes_per_unit);
  std::vector<Panel> panels;

  if (cfg.use_singularity_subtraction && inside) {
    for (double b : u.breakpoints) {
      if (std::abs(b - s) < 1e-14 * width) {
        // A kink at s is fine for the subtracted integrand; a jump is not.
        double delta = 1e-9 * width;
        double left = u.eval(s - delta), right = u.eval(s + delta);
        if (std::abs(left - right) > 1e-6 * (1.0 + std::abs(left) + std::abs(right)))
          throw std::invalid_argument("hilbert_pv: s is at a declared jump of u");
      }
    }
    double us = u.eval(s);
    if (!std::isfinite(us)) throw numerical_error("hilbert_pv: non-finite u(s)");
    auto edges = piece_edges(u, u.lo, u.hi, {s});
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      panels.clear();
      graded_panels(edges[i], edges[i + 1], panels);
      for (const auto& p : panels) acc.accumulate(p, s, true, us);
    }
    double log_term = us == 0.0 ? 0.0 : us * std::log((s - u.lo) / (u.hi - s));
    return acc.total() + log_term;
  }

  // Truncated principal value: drop |t-s| <= eta.
  double lo1 = u.lo, hi1 = std::min(u.hi, s - eta);
  double lo2 = std::max(u.lo, s + eta), hi2 = u.hi;
  for (auto [a, b] : {std::pair{lo1, hi1}, std::pair{lo2, hi2}}) {
    if (!(b > a)) continue;
    auto edges = piece_edges(u, a, b, {});
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      panels.clear();
      graded_panels(edges[i], edges[i + 1], panels);
      for (const auto& p : panels) acc.accumulate(p, s, false, 0.0);
    }
  }
  return acc.total();
}

double theta_eta(const ModelSpec& model, double s, double eta,
                 const PvQuadratureConfig& cfg) {
  if (!(eta > 0.0)) throw std::invalid_argument("theta_eta: eta must be > 0");
  const double M = model.spectrum_bound();
  if (std::abs(s) > 3.0 * M + 1e-12)
    throw std::invalid_argument("theta_eta: s outside the evaluation window");

  double rho_s = model.rho.density(s);
  if (rho_s == 0.0) return 0.0;

  double lo = std::max(model.rho.support_lo(), s - 2.0 * M);
  double hi = std::min(model.rho.support_hi(), s + 2.0 * M);

  PiecewiseFn u;
  u.lo = model.rho.support_lo();
  u.hi = model.rho.support_hi();
  u.eval = [&](double t) { return model.kernel(s, t) * model.rho.density(t); };
  u.breakpoints = model.kernel.t_breakpoints(s, u.lo, u.hi);
  for (double b : model.rho.breakpoints()) u.breakpoints.push_back(b);
  std::sort(u.breakpoints.begin(), u.breakpoints.end());

  PanelSum acc(u, cfg.nodes_per_unit);
  std::vector<Panel> panels;
  for (auto [a, b] : {std::pair{lo, std::min(hi, s - eta)},
                      std::pair{std::max(lo, s + eta), hi}}) {
    if (!(b > a)) continue;
    auto edges = piece_edges(u, a, b, {});
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      panels.clear();
      graded_panels(edges[i], edges[i + 1], panels);
      for (const auto& p : panels) acc.accumulate(p, s, false, 0.0);
    }
  }
  return rho_s * acc.total();
}

double hilbert_closed_form(const LimitDensity& rho, double s) {
  switch (rho.kind()) {
    case DensityKind::Uniform01: {
      if (s == 0.0) return -HUGE_VAL;
      if (s == 1.0) return HUGE_VAL;
      return std::log(std::abs(s / (s - 1.0)));
    }
    case DensityKind::Semicircle: {
      double t = rho.variance_param();
      double edge2 = 4.0 * t;
      if (s * s <= edge2) return s / (2.0 * t);
      double root = std::sqrt(s * s - edge2);
      return (s - (s > 0 ? root : -root)) / (2.0 * t);
    }
    case DensityKind::TriangularPulse: {
      // p.v. integral of (1-|t|)/(s-t) over [-1,1]; one expression is valid
      // on and off the support, with the x log x -> 0 convention.
      auto xlogabs = [](double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); };
      return xlogabs(1.0 + s) - xlogabs(1.0 - s) - 2.0 * xlogabs(s);
    }
    case DensityKind::Tabulated:
      throw std::invalid_argument("hilbert_closed_form: no closed form for tabulated densities");
  }
  return 0.0;
}

}  // namespace specden
