#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "specden/cauchy.hpp"
#include "specden/correction.hpp"
#include "specden/rng.hpp"

using namespace specden;
using cplx = std::complex<double>;

namespace {

std::vector<double> uniform_grid(double lo, double hi, int n) {
  std::vector<double> g(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) g[std::size_t(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

// Closed-form F for the built-in models, as a callable for oracles.
double closed_F(const ModelSpec& model, double s) {
  if (model.profile.kind() == ProfileKind::BandIndicator)
    return closed_form_F(ClosedFormExample::UniformBand,
                         model.profile.band_width(), s);
  if (model.rho.kind() == DensityKind::TriangularPulse)
    return closed_form_F(ClosedFormExample::TriangularPulseGOE, 0.0, s);
  // semicircle + constant: F = -rho(s) * s/(2c)
  double c = model.rho.variance_param();
  return -model.rho.density(s) * s / (2.0 * c);
}

// -\int g_z'(s) F(s) ds with g_z'(s) = 1/(z-s)^2, by plain midpoint; the
// integrand's log endpoints are integrable.
cplx minus_int_gprime_F(const ModelSpec& model, cplx z, int n = 400000) {
  double lo = model.rho.support_lo(), hi = model.rho.support_hi();
  double h = (hi - lo) / n;
  cplx acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = lo + (i + 0.5) * h;
    cplx zs = z - s;
    acc += closed_F(model, s) / (zs * zs);
  }
  return -acc * h;
}

// \int F ds with geometric refinement toward the singular points.
double integrate_F(const ModelSpec& model, const PvQuadratureConfig& cfg) {
  auto F = [&](double s) {
    double rho_s = model.rho.density(s);
    if (rho_s == 0.0) return 0.0;
    return -rho_s * hilbert_pv(correction_integrand(model, s), s, cfg);
  };
  auto pts = correction_singular_points(model);
  double acc = 0.0;
  for (std::size_t seg = 0; seg + 1 < pts.size(); ++seg) {
    double a = pts[seg], b = pts[seg + 1];
    double w = b - a;
    // graded tails at both segment ends + uniform middle
    auto midpoint = [&](double x0, double x1, int m) {
      double h = (x1 - x0) / m;
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += F(x0 + (i + 0.5) * h);
      return s * h;
    };
    double delta = 0.02 * w;
    acc += midpoint(a + delta, b - delta, 400);
    for (double q = delta; q > 1e-12 * w; q *= 0.5) {
      acc += midpoint(a + 0.5 * q, a + q, 6);
      acc += midpoint(b - q, b - 0.5 * q, 6);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("closed_form_F frozen values") {
  CHECK(closed_form_F(ClosedFormExample::UniformBand, 0.2, 0.1) ==
        doctest::Approx(0.6931471805599453).epsilon(1e-14));  // log 2
  CHECK(closed_form_F(ClosedFormExample::UniformBand, 0.2, 0.5) == 0.0);
  CHECK(closed_form_F(ClosedFormExample::TriangularPulseGOE, 0.0, 0.0) == 0.0);
  // (1-|s|){(1-s)log(1-s)-(1+s)log(1+s)+2s log|s|} at s = +-0.5
  CHECK(closed_form_F(ClosedFormExample::TriangularPulseGOE, 0.0, 0.5) ==
        doctest::Approx(-0.8239592165010823).epsilon(1e-14));
  CHECK(closed_form_F(ClosedFormExample::TriangularPulseGOE, 0.0, -0.5) ==
        doctest::Approx(0.8239592165010823).epsilon(1e-14));
  CHECK_THROWS(closed_form_F(ClosedFormExample::UniformBand, 1.5, 0.5));
}

TEST_CASE("closed_form_F cross-checked by the naive p.v. oracle") {
  auto model = triangular_goe_model(1024);
  for (double s : {0.3, 0.5, -0.7}) {
    double naive =
        -model.rho.density(s) *
        oracle::naive_pv([&](double t) { return model.rho.density(t); }, -1.0,
                         1.0, s, 500000);
    CHECK(closed_form_F(ClosedFormExample::TriangularPulseGOE, 0.0, s) ==
          doctest::Approx(naive).epsilon(2e-4));
  }
}

TEST_CASE("correction_F reproduces the band closed form away from kinks") {
  auto model = uniform_band_model(0.2);
  auto grid = uniform_grid(-0.02, 1.02, 521);
  auto table = correction_F(model, grid);
  CHECK(table.singular_points == std::vector<double>{0.0, 0.2, 0.8, 1.0});
  double eta = 1e-3;  // default exclusion
  int checked = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = grid[i];
    double dmin = HUGE_VAL;
    for (double p : table.singular_points) dmin = std::min(dmin, std::abs(s - p));
    if (dmin <= 10 * eta) continue;
    CHECK(std::abs(table.F_values[i] - closed_form_F(ClosedFormExample::UniformBand,
                                                     0.2, s)) <= 1e-3);
    ++checked;
  }
  CHECK(checked > 400);
}

TEST_CASE("correction_F triangular value at 0.5 and odd symmetry") {
  auto model = triangular_goe_model();
  auto grid = uniform_grid(-1.04, 1.04, 521);  // symmetric grid, includes +-0.5
  auto table = correction_F(model, grid);
  const auto n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(grid[i] - 0.5) < 1e-12)
      CHECK(table.F_values[i] == doctest::Approx(-0.8239592165010823).epsilon(1e-6));
    // odd symmetry against the mirrored node
    double mirrored = table.F_values[n - 1 - i];
    if (!table.flags[i] && !table.flags[n - 1 - i])
      CHECK(std::abs(table.F_values[i] + mirrored) <= 1e-7);
  }
}

TEST_CASE("F vanishes outside the support and dF differentiates F") {
  auto model = triangular_goe_model();
  auto grid = uniform_grid(-1.04, 1.04, 1041);
  auto table = correction_F(model, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= -1.0 || grid[i] >= 1.0) CHECK(table.F_values[i] == 0.0);
    if (std::abs(grid[i] - 0.5) < 1e-9) {
      // analytic F'(0.5) = log 3
      CHECK(table.dF_values[i] == doctest::Approx(std::log(3.0)).epsilon(1e-3));
    }
  }
}

TEST_CASE("flags mark grid points near singular points") {
  auto model = uniform_band_model(0.2);
  PvQuadratureConfig cfg;
  cfg.exclusion_eta = 5e-3;
  auto grid = uniform_grid(-0.02, 1.02, 1041);
  auto table = correction_F(model, grid, cfg);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double dmin = HUGE_VAL;
    for (double p : table.singular_points)
      dmin = std::min(dmin, std::abs(grid[i] - p));
    if (grid[i] > 0.0 && grid[i] < 1.0)
      CHECK(bool(table.flags[i]) == (dmin <= cfg.exclusion_eta));
  }
}

TEST_CASE("correction_F error paths") {
  auto model = uniform_band_model(0.2, 512);
  CHECK_THROWS_AS((void)correction_F(model, uniform_grid(0.4, 0.6, 33)),
                  std::invalid_argument);
  HolderParams hp;
  hp.c = 1e-12;  // absurd Holder constant: validation must fail
  auto bad = make_model(LimitDensity::uniform01(), VarianceProfile::band(0.2),
                        512, hp);
  CHECK_THROWS_AS((void)correction_F(bad, uniform_grid(-0.1, 1.1, 129)),
                  hypothesis_error);
}

TEST_CASE("first moment of F vanishes, including for an asymmetric density") {
  PvQuadratureConfig cfg;
  cfg.nodes_per_unit = 1024;
  // asymmetric tabulated density on [0,1]
  auto rho = LimitDensity::tabulated(0.0, 1.0, {0.2, 0.5, 0.9, 1.4, 1.8});
  auto model = make_model(rho, VarianceProfile::constant(1.0), 2048);
  CHECK(std::abs(integrate_F(model, cfg)) <= 1e-4);
  auto tri = triangular_goe_model(2048);
  CHECK(std::abs(integrate_F(tri, cfg)) <= 1e-4);
}

TEST_CASE("lambda integrand algebra: bracketed kernel equals 1/((z-t)(z-s)^2)") {
  GaussianStream rng(31, 0);
  for (int k = 0; k < 200; ++k) {
    cplx z(2.0 * rng.next_uniform() - 1.0, 0.2 + rng.next_uniform());
    double s = 2.0 * rng.next_uniform() - 1.0;
    double t = s + (rng.next_uniform() < 0.5 ? -1 : 1) * (0.05 + rng.next_uniform());
    cplx g_t = 1.0 / (z - t), g_s = 1.0 / (z - s);
    cplx gp_s = 1.0 / ((z - s) * (z - s));
    cplx raw = (g_t - g_s - gp_s * (t - s)) / ((t - s) * (t - s));
    cplx simplified = 1.0 / ((z - t) * (z - s) * (z - s));
    CHECK(std::abs(raw - simplified) <= 1e-9 * (1.0 + std::abs(simplified)));
  }
}

TEST_CASE("lambda_functional decays like Y^-3 at z = iY") {
  auto model = uniform_band_model(0.2, 512);
  double l10 = std::abs(lambda_functional(model, cplx(0, 10.0)).value);
  double l100 = std::abs(lambda_functional(model, cplx(0, 100.0)).value);
  CHECK(l10 <= 1.1e-3);
  CHECK(l100 <= 1.1e-6);
  CHECK(l10 / l100 == doctest::Approx(1000.0).epsilon(0.2));
}

TEST_CASE("oracle triangle: Lambda(g_z) = -int g' F for the built-ins") {
  GaussianStream rng(7, 0);
  for (const auto& model : {uniform_band_model(0.2, 2048), triangular_goe_model(2048),
                            semicircle_goe_model(1.0, 2048)}) {
    for (int k = 0; k < 10; ++k) {
      cplx z(2.0 * rng.next_uniform() - 0.5, 0.4 + 1.6 * rng.next_uniform());
      auto lam = lambda_functional(model, z);
      cplx oracle_val = minus_int_gprime_F(model, z);
      CHECK(std::abs(lam.value - oracle_val) <=
            1e-3 * (1.0 + std::abs(lam.value)));
    }
  }
}

TEST_CASE("lambda_eta: empty domain, convergence, antisymmetry cancellation") {
  auto model = uniform_band_model(0.2, 1024);
  cplx z(0.5, 0.5);
  double m4 = 4.0 * model.spectrum_bound();
  CHECK(lambda_eta(model, z, m4) == cplx(0.0, 0.0));

  LambdaConfig cfg;
  cfg.nodes_per_dim = 2048;
  auto lam = lambda_functional(model, z, cfg).value;
  double prev = HUGE_VAL;
  for (double eta : {1e-1, 1e-2, 1e-3}) {
    double d = std::abs(lambda_eta(model, z, eta, cfg) - lam);
    CHECK(d < prev + 1e-12);
    prev = d;
  }
  CHECK(prev <= 2e-2 * (1.0 + std::abs(lam)));

  CHECK(std::abs(lambda_eta_symmetry_residual(model, z, 1e-2)) <= 1e-12);
  CHECK_THROWS(lambda_eta(model, z, -1.0));
  CHECK_THROWS(lambda_eta(model, cplx(0.5, -0.5), 0.1));
  CHECK_THROWS(lambda_functional(model, cplx(0.5, 0.0)));
}

TEST_CASE("lambda matches the solver slope at z = 2i by Richardson in eps") {
  auto model = semicircle_goe_model(1.0, 2048);
  cplx z(0.0, 2.0);
  auto lam = lambda_functional(model, z, LambdaConfig{2048}).value;
  SolverConfig cfg;
  cfg.tol = 1e-13;
  auto slope = first_order_slope(model, z, {1e-3, 1e-4}, cfg);
  CHECK(std::abs(slope - lam) <= 1e-2 * (1.0 + std::abs(lam)));
}

TEST_CASE("lambda error bound covers the diagonal strip honestly") {
  auto model = triangular_goe_model(512);
  cplx z(0.1, 0.7);
  LambdaConfig coarse{256}, fine{4096};
  auto a = lambda_functional(model, z, coarse);
  auto b = lambda_functional(model, z, fine);
  CHECK(std::abs(a.value - b.value) <= a.error_bound + 1e-6);
  CHECK(a.error_bound > 0.0);
}
