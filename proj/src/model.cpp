#include "specden/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specden/common.hpp"
#include "specden/numfmt.hpp"

namespace specden {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

// ---------------------------------------------------------------------------
// LimitDensity
// ---------------------------------------------------------------------------

LimitDensity LimitDensity::uniform01() {
  LimitDensity d;
  d.kind_ = DensityKind::Uniform01;
  d.lo_ = 0.0;
  d.hi_ = 1.0;
  return d;
}

LimitDensity LimitDensity::triangular_pulse() {
  LimitDensity d;
  d.kind_ = DensityKind::TriangularPulse;
  d.lo_ = -1.0;
  d.hi_ = 1.0;
  d.breaks_ = {0.0};
  return d;
}

LimitDensity LimitDensity::semicircle(double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("semicircle: variance must be > 0");
  LimitDensity d;
  d.kind_ = DensityKind::Semicircle;
  d.variance_ = variance;
  d.hi_ = 2.0 * std::sqrt(variance);
  d.lo_ = -d.hi_;
  return d;
}

LimitDensity LimitDensity::tabulated(double lo, double hi,
                                     std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("tabulated density: values must be finite and >= 0");
  }
  LimitDensity d;
  d.kind_ = DensityKind::Tabulated;
  d.lo_ = lo;
  d.hi_ = hi;
  d.table_ = UniformTable(lo, hi, std::move(values));
  // Normalize to unit mass (trapezoid), then build the CDF on the same grid.
  const auto& v = d.table_.values();
  double h = d.table_.step();
  std::vector<double> cum(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i)
    cum[i] = cum[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
  double mass = cum.back();
  if (!(mass > 0.0)) throw std::invalid_argument("tabulated density: zero total mass");
  std::vector<double> scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = v[i] / mass;
  d.table_ = UniformTable(lo, hi, std::move(scaled));
  for (auto& c : cum) c /= mass;
  cum.back() = 1.0;
  d.cdf_table_ = UniformTable(lo, hi, std::move(cum));
  return d;
}

double LimitDensity::density(double s) const {
  switch (kind_) {
    case DensityKind::Uniform01:
      return (s >= 0.0 && s <= 1.0) ? 1.0 : 0.0;
    case DensityKind::TriangularPulse:
      return (s >= -1.0 && s <= 1.0) ? 1.0 - std::abs(s) : 0.0;
    case DensityKind::Semicircle: {
      double r = 4.0 * variance_ - s * s;
      return r > 0.0 ? std::sqrt(r) / (2.0 * kPi * variance_) : 0.0;
    }
    case DensityKind::Tabulated:
      return (s >= lo_ && s <= hi_) ? table_(s) : 0.0;
  }
  return 0.0;
}

double LimitDensity::cdf(double s) const {
  if (s <= lo_) return 0.0;
  if (s >= hi_) return 1.0;
  switch (kind_) {
    case DensityKind::Uniform01:
      return s;
    case DensityKind::TriangularPulse:
      return s <= 0.0 ? 0.5 * (1.0 + s) * (1.0 + s)
                      : 1.0 - 0.5 * (1.0 - s) * (1.0 - s);
    case DensityKind::Semicircle: {
      double r = 2.0 * std::sqrt(variance_);
      double u = std::clamp(s / r, -1.0, 1.0);
      return 0.5 + s * std::sqrt(r * r - s * s) / (2.0 * kPi * variance_ * 2.0) +
             std::asin(u) / kPi;
    }
    case DensityKind::Tabulated:
      return cdf_table_(s);
  }
  return 0.0;
}

double LimitDensity::quantile(double p) const {
  p = clamp01(p);
  switch (kind_) {
    case DensityKind::Uniform01:
      return p;
    case DensityKind::TriangularPulse:
      return p <= 0.5 ? -1.0 + std::sqrt(2.0 * p) : 1.0 - std::sqrt(2.0 * (1.0 - p));
    case DensityKind::Semicircle: {
      // Bisection on the closed-form CDF.
      double a = lo_, b = hi_;
      for (int it = 0; it < 200 && (b - a) > 1e-15 * (hi_ - lo_); ++it) {
        double m = 0.5 * (a + b);
        (cdf(m) < p ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    case DensityKind::Tabulated:
      return cdf_table_.inverse(p);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// DiagonalSymbol
// ---------------------------------------------------------------------------

DiagonalSymbol DiagonalSymbol::identity() {
  DiagonalSymbol f;
  f.kind_ = SymbolKind::Identity;
  f.bound_ = 1.0;
  return f;
}

DiagonalSymbol DiagonalSymbol::tabulated(std::vector<double> values_on_01) {
  DiagonalSymbol f;
  f.kind_ = SymbolKind::Tabulated;
  f.table_ = UniformTable(0.0, 1.0, std::move(values_on_01));
  double m = 0.0;
  for (double v : f.table_.values()) m = std::max(m, std::abs(v));
  f.bound_ = m;
  return f;
}

double DiagonalSymbol::operator()(double x) const {
  x = clamp01(x);
  return kind_ == SymbolKind::Identity ? x : table_(x);
}

bool DiagonalSymbol::nondecreasing() const {
  return kind_ == SymbolKind::Identity || table_.nondecreasing();
}

double DiagonalSymbol::inverse(double s) const {
  switch (kind_) {
    case SymbolKind::Identity:
      return clamp01(s);
    case SymbolKind::Quantile:
      return source_->cdf(s);
    case SymbolKind::Tabulated:
      if (!table_.nondecreasing())
        throw std::invalid_argument("symbol inverse: f is not monotone");
      return table_.inverse(s);
  }
  return 0.0;
}

DiagonalSymbol quantile_from_density(const LimitDensity& rho, int resolution) {
  if (resolution < 2) throw std::invalid_argument("quantile_from_density: resolution >= 2");
  std::vector<double> vals(std::size_t(resolution) + 1, 0.0);
  for (int i = 0; i <= resolution; ++i)
    vals[std::size_t(i)] = rho.quantile(double(i) / double(resolution));
  DiagonalSymbol f;
  f.kind_ = SymbolKind::Quantile;
  f.table_ = UniformTable(0.0, 1.0, std::move(vals));
  f.bound_ = std::max(std::abs(rho.support_lo()), std::abs(rho.support_hi()));
  f.source_ = std::make_shared<LimitDensity>(rho);
  return f;
}

// ---------------------------------------------------------------------------
// VarianceProfile
// ---------------------------------------------------------------------------

VarianceProfile VarianceProfile::constant(double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("profile: constant must be >= 0");
  VarianceProfile p;
  p.kind_ = ProfileKind::Constant;
  p.const_ = c;
  p.bound_ = c;
  return p;
}

VarianceProfile VarianceProfile::band(double ell) {
  if (!(ell >= 0.0 && ell <= 1.0))
    throw std::invalid_argument("profile: band width must be in [0,1]");
  VarianceProfile p;
  p.kind_ = ProfileKind::BandIndicator;
  p.ell_ = ell;
  p.bound_ = 1.0;
  return p;
}

VarianceProfile VarianceProfile::tabulated(std::size_t k,
                                           std::vector<double> values) {
  if (k < 2 || values.size() != k * k)
    throw std::invalid_argument("profile: need k*k values, k >= 2");
  double b = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double v = values[i * k + j];
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("profile: values must be finite and >= 0");
      if (std::abs(v - values[j * k + i]) > 1e-12 * std::max(1.0, std::abs(v)))
        throw std::invalid_argument("profile: table is not symmetric");
      b = std::max(b, v);
    }
  }
  VarianceProfile p;
  p.kind_ = ProfileKind::Tabulated;
  p.k_ = k;
  p.values_ = std::move(values);
  p.bound_ = b;
  return p;
}

double VarianceProfile::operator()(double x, double y) const {
  x = clamp01(x);
  y = clamp01(y);
  switch (kind_) {
    case ProfileKind::Constant:
      return const_;
    case ProfileKind::BandIndicator:
      return std::abs(x - y) <= ell_ ? 1.0 : 0.0;
    case ProfileKind::Tabulated: {
      double rx = x * double(k_ - 1), ry = y * double(k_ - 1);
      auto i = std::min(std::size_t(rx), k_ - 2);
      auto j = std::min(std::size_t(ry), k_ - 2);
      double wx = rx - double(i), wy = ry - double(j);
      double v00 = values_[i * k_ + j], v01 = values_[i * k_ + j + 1];
      double v10 = values_[(i + 1) * k_ + j], v11 = values_[(i + 1) * k_ + j + 1];
      return (1 - wx) * ((1 - wy) * v00 + wy * v01) +
             wx * ((1 - wy) * v10 + wy * v11);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// SpectralKernel
// ---------------------------------------------------------------------------

SpectralKernel SpectralKernel::callable(
    std::function<double(double, double)> fn, double sup_bound,
    HolderParams hp) {
  SpectralKernel k;
  k.fn_ = std::move(fn);
  k.bound_ = sup_bound;
  k.alpha_ = hp.alpha;
  k.holder_c_ = hp.c > 0.0 ? hp.c : 1.0;
  k.eta0_ = hp.eta0 > 0.0 ? hp.eta0 : 0.05;
  return k;
}

double SpectralKernel::operator()(double s, double t) const {
  if (!from_profile_) return fn_(s, t);
  return profile_(f_.inverse(s), f_.inverse(t));
}

std::vector<double> SpectralKernel::t_breakpoints(double s, double lo,
                                                  double hi) const {
  std::vector<double> out;
  if (from_profile_ && profile_.kind() == ProfileKind::BandIndicator) {
    double xs = f_.inverse(s);
    double ell = profile_.band_width();
    for (double xe : {xs - ell, xs + ell}) {
      if (xe > 0.0 && xe < 1.0) {
        double t = f_(xe);
        if (t > lo && t < hi) out.push_back(t);
      }
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<double> SpectralKernel::s_breakpoints(
    double lo, double hi, const std::vector<double>& rho_breaks) const {
  std::vector<double> out;
  if (from_profile_ && profile_.kind() == ProfileKind::BandIndicator) {
    double ell = profile_.band_width();
    std::vector<double> anchors = rho_breaks;
    anchors.push_back(lo);
    anchors.push_back(hi);
    for (double b : anchors) {
      double xb = f_.inverse(b);
      for (double xe : {xb - ell, xb + ell}) {
        if (xe > 0.0 && xe < 1.0) {
          double t = f_(xe);
          if (t > lo && t < hi) out.push_back(t);
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) < 1e-12 * (hi - lo);
                          }),
              out.end());
  }
  return out;
}

SpectralKernel kernel_from_profile(const VarianceProfile& profile,
                                   const DiagonalSymbol& f, int resolution,
                                   HolderParams hp) {
  if (resolution < 2) throw std::invalid_argument("kernel_from_profile: resolution >= 2");
  if (!f.nondecreasing())
    throw std::invalid_argument("kernel_from_profile: f must be nondecreasing");

  // Profile symmetry on a sampled grid.
  int m = 64;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double x = (i + 0.5) / m, y = (j + 0.5) / m;
      if (std::abs(profile(x, y) - profile(y, x)) > 1e-9 * (1.0 + profile.bound()))
        throw std::invalid_argument("kernel_from_profile: profile is not symmetric");
    }
  }

  SpectralKernel k;
  k.from_profile_ = true;
  k.profile_ = profile;
  k.f_ = f;
  k.bound_ = profile.bound();
  k.alpha_ = hp.alpha;

  double slo = f(0.0), shi = f(1.0);
  double width = std::max(shi - slo, 1e-12);
  k.eta0_ = hp.eta0 > 0.0 ? hp.eta0 : 0.05 * width;

  if (hp.c > 0.0) {
    k.holder_c_ = hp.c;
  } else {
    // Estimate the Holder constant of u_s(t) = tau(s,t) rho(t) against
    // |t-s|^alpha on a fixed deterministic sample. Only a verification
    // anchor; exact inference from samples is not attempted.
    const LimitDensity* rho = f.source_density();
    LimitDensity fallback = LimitDensity::uniform01();
    if (!rho) rho = &fallback;
    double cmax = 0.0;
    const int ns = 256, nt = 32;
    for (int i = 0; i < ns; ++i) {
      double s = slo + (i + 0.5) * width / ns;
      double us = k(s, s) * rho->density(s);
      for (int j = 1; j <= nt; ++j) {
        double dt = k.eta0_ * j / nt;
        for (double t : {s - dt, s + dt}) {
          double ut = k(s, t) * rho->density(t);
          double ratio = std::abs(ut - us) / std::pow(dt, k.alpha_);
          cmax = std::max(cmax, ratio);
        }
      }
    }
    k.holder_c_ = std::max(1.0, 2.0 * cmax);
  }
  return k;
}

// ---------------------------------------------------------------------------
// ModelSpec and validation
// ---------------------------------------------------------------------------

ModelSpec make_model(const LimitDensity& rho, const VarianceProfile& profile,
                     int resolution, HolderParams hp) {
  ModelSpec m;
  m.rho = rho;
  m.profile = profile;
  m.f = quantile_from_density(rho, resolution);
  m.kernel = kernel_from_profile(profile, m.f, resolution, hp);
  m.resolution = resolution;
  return m;
}

ModelSpec uniform_band_model(double ell, int resolution) {
  if (!(ell > 0.0 && ell <= 1.0))
    throw std::invalid_argument("uniform_band_model: ell must be in (0,1]");
  return make_model(LimitDensity::uniform01(), VarianceProfile::band(ell),
                    resolution);
}

ModelSpec triangular_goe_model(int resolution) {
  return make_model(LimitDensity::triangular_pulse(),
                    VarianceProfile::constant(1.0), resolution);
}

ModelSpec semicircle_goe_model(double c, int resolution) {
  return make_model(LimitDensity::semicircle(c), VarianceProfile::constant(1.0),
                    resolution);
}

bool HypothesisReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

HypothesisReport validate_hypotheses(const ModelSpec& model, int samples) {
  HypothesisReport rep;
  const int n = std::max(16, samples);
  const int g = std::max(8, int(std::sqrt(double(n))));
  double slo = model.rho.support_lo(), shi = model.rho.support_hi();
  double width = shi - slo;

  // Symmetry of the profile.
  {
    double worst = 0.0;
    for (int i = 0; i < g; ++i)
      for (int j = i + 1; j < g; ++j) {
        double x = (i + 0.5) / g, y = (j + 0.5) / g;
        worst = std::max(worst, std::abs(model.profile(x, y) - model.profile(y, x)));
      }
    rep.checks.push_back({"profile symmetry", worst <= 1e-9, worst, ""});
  }

  // Kernel symmetry.
  {
    double worst = 0.0;
    for (int i = 0; i < g; ++i)
      for (int j = i + 1; j < g; ++j) {
        double s = slo + (i + 0.5) * width / g;
        double t = slo + (j + 0.5) * width / g;
        worst = std::max(worst, std::abs(model.kernel(s, t) - model.kernel(t, s)));
      }
    rep.checks.push_back({"kernel symmetry", worst <= 1e-9, worst, ""});
  }

  // Boundedness: |f| <= M, 0 <= sigma^2 <= bound, rho >= 0.
  {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = (i + 0.5) / n;
      worst = std::max(worst, std::abs(model.f(x)) - model.f.bound());
    }
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        double v = model.profile((i + 0.5) / g, (j + 0.5) / g);
        worst = std::max(worst, v - model.profile.bound());
        worst = std::max(worst, -v);
      }
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, -model.rho.density(slo + (i + 0.5) * width / n));
    rep.checks.push_back({"boundedness", worst <= 1e-12, worst, ""});
  }

  // Density mass.
  {
    double mass = 0.0;
    double h = width / n;
    for (int i = 0; i < n; ++i) mass += model.rho.density(slo + (i + 0.5) * h) * h;
    double err = std::abs(mass - 1.0);
    rep.checks.push_back({"density mass", err <= 1e-3, err,
                          "midpoint mass = " + format_double(mass)});
  }

  // Holder control of u_s(t) = tau(s,t) rho(t) near the diagonal.
  // Verified against the kernel's stored (alpha, C, eta0) on a sample grid
  // distinct from the estimation grid.
  {
    double worst = 0.0;
    const int ns = 173, nt = 16;
    for (int i = 0; i < ns; ++i) {
      double s = slo + (i + 0.5) * width / ns;
      double us = model.kernel(s, s) * model.rho.density(s);
      for (int j = 1; j <= nt; ++j) {
        double dt = model.kernel.eta0() * j / nt;
        for (double t : {s - dt, s + dt}) {
          double ut = model.kernel(s, t) * model.rho.density(t);
          double viol = std::abs(ut - us) -
                        model.kernel.holder_c() * std::pow(dt, model.kernel.alpha());
          worst = std::max(worst, viol);
        }
      }
    }
    rep.checks.push_back({"holder control", worst <= 1e-9, worst,
                          "C = " + format_double(model.kernel.holder_c())});
  }

  // Push-forward: empirical CDF of {f(i/N)} vs rho's CDF.
  {
    int N = n;
    std::vector<double> vals(std::size_t(N), 0.0);
    for (int i = 1; i <= N; ++i) vals[std::size_t(i - 1)] = model.f(double(i) / N);
    std::sort(vals.begin(), vals.end());
    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
      double c = model.rho.cdf(vals[std::size_t(i)]);
      worst = std::max(worst, std::abs(c - double(i) / N));
      worst = std::max(worst, std::abs(c - double(i + 1) / N));
    }
    double tol = 2.0 / N + 10.0 / model.resolution + 1e-9;
    rep.checks.push_back({"push-forward", worst <= tol, worst,
                          "tolerance " + format_double(tol)});
  }

  // Consistency sigma^2(x,y) = tau(f(x), f(y)).
  {
    double worst = 0.0;
    const int gc = 100;
    for (int i = 0; i < gc; ++i)
      for (int j = 0; j < gc; ++j) {
        double x = (i + 0.5) / gc, y = (j + 0.5) / gc;
        double lhs = model.profile(x, y);
        double rhs = model.kernel(model.f(x), model.f(y));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    double tol = 10.0 / model.resolution;
    rep.checks.push_back({"profile-kernel consistency", worst <= tol, worst,
                          "tolerance " + format_double(tol)});
  }

  return rep;
}

std::uint64_t model_hash(const ModelSpec& model) {
  std::string repr;
  switch (model.rho.kind()) {
    case DensityKind::Uniform01: repr += "uniform01"; break;
    case DensityKind::TriangularPulse: repr += "triangular"; break;
    case DensityKind::Semicircle:
      repr += "semicircle:" + format_double(model.rho.variance_param());
      break;
    case DensityKind::Tabulated:
      repr += "tabulated:" + format_double(model.rho.support_lo()) + ":" +
              format_double(model.rho.support_hi());
      break;
  }
  repr += "|";
  switch (model.profile.kind()) {
    case ProfileKind::Constant:
      repr += "constant:" + format_double(model.profile.constant_value());
      break;
    case ProfileKind::BandIndicator:
      repr += "band:" + format_double(model.profile.band_width());
      break;
    case ProfileKind::Tabulated: repr += "tabulated-profile"; break;
  }
  repr += "|res:" + std::to_string(model.resolution);
  repr += "|alpha:" + format_double(model.kernel.alpha());
  repr += "|eta0:" + format_double(model.kernel.eta0());

  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : repr) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace specden
