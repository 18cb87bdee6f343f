#include "specden/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specden/burgers.hpp"
#include "specden/cauchy.hpp"
#include "specden/common.hpp"
#include "specden/correction.hpp"
#include "specden/csv.hpp"
#include "specden/matrix_sim.hpp"
#include "specden/model.hpp"
#include "specden/numfmt.hpp"

namespace specden {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct CommonOpts {
  std::string out = "out";
  std::string config;
  std::string example;
  double ell = 0.2;
  double semicircle_c = 1.0;
  double semicircle_shortcut = -1.0;
  int resolution = 4096;
  int threads = 0;  // 0: hardware concurrency
  std::uint64_t seed = 42;

  int effective_threads() const {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
  }
};

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
  }
}

ModelSpec model_from_config(const std::string& path, int resolution_override) try {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  check_keys(j, {"density", "profile", "kernel", "resolution"}, "top level");

  int resolution = resolution_override > 0
                       ? resolution_override
                       : j.value("resolution", 4096);

  if (!j.contains("density") || !j.contains("profile"))
    throw std::invalid_argument("config: 'density' and 'profile' are required");

  const auto& jd = j["density"];
  check_keys(jd, {"kind", "params"}, "density");
  std::string dkind = jd.at("kind").get<std::string>();
  nlohmann::json dp = jd.value("params", nlohmann::json::object());
  LimitDensity rho = LimitDensity::uniform01();
  if (dkind == "uniform01") {
    check_keys(dp, {}, "density.params");
  } else if (dkind == "triangular-pulse") {
    check_keys(dp, {}, "density.params");
    rho = LimitDensity::triangular_pulse();
  } else if (dkind == "semicircle") {
    check_keys(dp, {"variance"}, "density.params");
    rho = LimitDensity::semicircle(dp.at("variance").get<double>());
  } else if (dkind == "tabulated") {
    check_keys(dp, {"lo", "hi", "values"}, "density.params");
    rho = LimitDensity::tabulated(dp.at("lo").get<double>(), dp.at("hi").get<double>(),
                                  dp.at("values").get<std::vector<double>>());
  } else {
    throw std::invalid_argument("config: unknown density.kind '" + dkind + "'");
  }

  const auto& jp = j["profile"];
  check_keys(jp, {"kind", "params"}, "profile");
  std::string pkind = jp.at("kind").get<std::string>();
  nlohmann::json pp = jp.value("params", nlohmann::json::object());
  VarianceProfile profile = VarianceProfile::constant(1.0);
  if (pkind == "constant") {
    check_keys(pp, {"value"}, "profile.params");
    profile = VarianceProfile::constant(pp.value("value", 1.0));
  } else if (pkind == "band") {
    check_keys(pp, {"width"}, "profile.params");
    profile = VarianceProfile::band(pp.at("width").get<double>());
  } else if (pkind == "tabulated") {
    check_keys(pp, {"k", "values"}, "profile.params");
    profile = VarianceProfile::tabulated(pp.at("k").get<std::size_t>(),
                                         pp.at("values").get<std::vector<double>>());
  } else {
    throw std::invalid_argument("config: unknown profile.kind '" + pkind + "'");
  }

  HolderParams hp;
  if (j.contains("kernel")) {
    check_keys(j["kernel"], {"alpha", "eta0"}, "kernel");
    hp.alpha = j["kernel"].value("alpha", 1.0);
    hp.eta0 = j["kernel"].value("eta0", -1.0);
  }
  return make_model(rho, profile, resolution, hp);
} catch (const nlohmann::json::exception& e) {
  throw std::invalid_argument("config: " + std::string(e.what()));
}

ModelSpec build_model(const CommonOpts& opts) {
  if (opts.semicircle_shortcut > 0.0 && opts.example.empty())
    return semicircle_goe_model(opts.semicircle_shortcut, opts.resolution);
  if (!opts.example.empty()) {
    if (opts.example == "uniform-band") return uniform_band_model(opts.ell, opts.resolution);
    if (opts.example == "triangular-goe") return triangular_goe_model(opts.resolution);
    if (opts.example == "semicircle-goe")
      return semicircle_goe_model(opts.semicircle_c, opts.resolution);
    throw std::invalid_argument("unknown --example '" + opts.example +
                                "' (uniform-band | triangular-goe | semicircle-goe)");
  }
  if (!opts.config.empty()) return model_from_config(opts.config, 0);
  throw std::invalid_argument("no model given: use --example or --config");
}

std::string model_name(const CommonOpts& opts) {
  if (opts.semicircle_shortcut > 0.0 && opts.example.empty()) return "semicircle-goe";
  if (!opts.example.empty()) return opts.example;
  if (!opts.config.empty()) return "config:" + opts.config;
  return "?";
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  std::vector<double> g(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) g[std::size_t(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

// Theory curve for the shift comparison: exact closed forms for the two
// reference examples, p.v. quadrature otherwise.
std::vector<double> theory_curve(const ModelSpec& model, const CommonOpts& opts,
                                 const std::vector<double>& grid) {
  std::vector<double> f(grid.size(), 0.0);
  if (opts.example == "uniform-band") {
    for (std::size_t i = 0; i < grid.size(); ++i)
      f[i] = closed_form_F(ClosedFormExample::UniformBand, opts.ell, grid[i]);
  } else if (opts.example == "triangular-goe") {
    for (std::size_t i = 0; i < grid.size(); ++i)
      f[i] = closed_form_F(ClosedFormExample::TriangularPulseGOE, 0.0, grid[i]);
  } else {
    auto table = correction_F(model, grid);
    f = table.F_values;
  }
  return f;
}

void write_metadata(const fs::path& path, const CommonOpts& opts,
                    const ModelSpec& model, ordered_json extra) {
  ordered_json j;
  j["model"] = model_name(opts);
  j["model_hash"] = model_hash(model);
  j["resolution"] = model.resolution;
  j["seed"] = opts.seed;
  for (auto& [k, v] : extra.items()) j[k] = v;
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
}

std::vector<double> parse_t_grid(const std::string& spec) {
  // lo:hi:step
  double lo = 0.0, hi = 0.0, step = 0.0;
  auto p1 = spec.find(':');
  auto p2 = spec.rfind(':');
  if (p1 == std::string::npos || p2 == p1)
    throw std::invalid_argument("--t-grid must be lo:hi:step");
  lo = parse_double(spec.substr(0, p1));
  hi = parse_double(spec.substr(p1 + 1, p2 - p1 - 1));
  step = parse_double(spec.substr(p2 + 1));
  if (!(step > 0.0) || !(hi > lo))
    throw std::invalid_argument("--t-grid must satisfy hi > lo, step > 0");
  std::vector<double> t;
  for (double v = lo; v <= hi + 1e-12 * step; v += step) t.push_back(v);
  if (t.size() < 3) throw std::invalid_argument("--t-grid needs >= 3 points");
  return t;
}

int cmd_theory(const CommonOpts& opts, int grid_n) {
  ModelSpec model = build_model(opts);
  auto rep = validate_hypotheses(model, 1000);
  if (!rep.all_pass()) {
    for (const auto& c : rep.checks)
      if (!c.pass)
        std::cerr << "hypothesis check failed: " << c.name << " (worst "
                  << c.worst << ")\n";
    return 3;
  }
  double lo = model.rho.support_lo(), hi = model.rho.support_hi();
  double pad = 0.03 * (hi - lo);
  auto grid = uniform_grid(lo - pad, hi + pad, grid_n);
  auto table = correction_F(model, grid);
  fs::create_directories(opts.out);
  fs::path path = fs::path(opts.out) / "correction.csv";
  csv::write_correction(path.string(), table);
  write_metadata(fs::path(opts.out) / "theory_metadata.json", opts, model,
                 {{"grid_n", grid_n}});
  std::cout << "wrote " << path.string() << " (" << grid.size() << " rows)\n";
  return 0;
}

int cmd_solve(const CommonOpts& opts, double eps, double smoothing_eta,
              int grid_n, bool verbose) {
  ModelSpec model = build_model(opts);
  double lo = model.rho.support_lo(), hi = model.rho.support_hi();
  double spread = 2.0 * std::sqrt(std::max(eps, 0.0) * model.profile.bound());
  double pad = 0.05 * (hi - lo) + spread;
  auto grid = uniform_grid(lo - pad, hi + pad, grid_n);
  double eta = smoothing_eta > 0.0 ? smoothing_eta : 1e-3 * (hi - lo);
  SolverConfig cfg;
  // Resolve the smoothing height on the x-grid; the eps = 0 measure is a sum
  // of x_nodes atoms, and coarser grids leave comb artifacts in the density.
  int wanted = int(std::ceil(8.0 / std::max(eta / (hi - lo), 1e-6)));
  cfg.x_nodes = std::clamp(wanted, 512, 16384);
  if (model.profile.kind() == ProfileKind::Tabulated)
    cfg.x_nodes = std::min(cfg.x_nodes, 2048);
  SolveDiagnostics diag;
  auto table = stieltjes_invert(model, eps, grid, eta, cfg,
                                opts.effective_threads(), &diag);
  if (verbose) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      std::cerr << "s=" << grid[i] << " iterations=" << diag.iterations[i]
                << " residual=" << diag.residuals[i] << '\n';
  }
  fs::create_directories(opts.out);
  fs::path path = fs::path(opts.out) / "density.csv";
  csv::write_density(path.string(), table);
  write_metadata(fs::path(opts.out) / "solve_metadata.json", opts, model,
                 {{"eps", eps}, {"smoothing_eta", eta}, {"grid_n", grid_n}});
  std::cout << "wrote " << path.string() << " (" << grid.size() << " rows)\n";
  return 0;
}

int cmd_simulate(const CommonOpts& opts, int n, double eps, int replicates,
                 int grid_n) {
  ModelSpec model = build_model(opts);
  auto samples = sample_replicates(n, eps, model, opts.seed, replicates,
                                   opts.effective_threads());
  EnsembleSample baseline = sample_perturbed(n, 0.0, model, opts.seed, 0);

  fs::create_directories(opts.out);
  fs::path eig_path = fs::path(opts.out) / "eigenvalues.csv";
  csv::write_eigenvalues(eig_path.string(), samples);

  if (eps > 0.0) {
    double lo = model.rho.support_lo(), hi = model.rho.support_hi();
    double pad = 0.02 * (hi - lo);
    auto grid = uniform_grid(lo + pad, hi - pad, grid_n);
    auto shift = replicate_average(samples, baseline, grid);
    auto theory = theory_curve(model, opts, grid);
    fs::path shift_path = fs::path(opts.out) / "shift.csv";
    csv::write_shift(shift_path.string(), shift, theory);
    std::cout << "wrote " << shift_path.string() << '\n';
  }
  write_metadata(fs::path(opts.out) / "metadata.json", opts, model,
                 {{"n", n}, {"eps", eps}, {"replicates", replicates}});
  std::cout << "wrote " << eig_path.string() << " (" << replicates
            << " replicates, n=" << n << ")\n";
  return 0;
}

int cmd_burgers(const CommonOpts& opts, double c, const std::string& t_grid_spec,
                double ds, bool semigroup, double t_single, double smoothing_eta) {
  fs::create_directories(opts.out);
  if (semigroup) {
    double edge = 2.0 * std::sqrt(c + t_single);
    double margin = 0.05 * edge;
    const int n = 401;
    auto grid = uniform_grid(-edge + margin, edge - margin, n);
    ModelSpec model = semicircle_goe_model(c);
    SolverConfig cfg;
    if (t_single < 0.05) {
      // near-atomic regime: the x-grid must resolve the smoothing height
      cfg.x_nodes = std::clamp(int(std::ceil(16.0 * edge / smoothing_eta)), 512, 16384);
    }
    auto table = stieltjes_invert(model, t_single, grid, smoothing_eta, cfg,
                                  opts.effective_threads());
    std::vector<double> closed(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      closed[i] = semicircle_density(c + t_single, grid[i]);
    fs::path path = fs::path(opts.out) / "semigroup.csv";
    csv::write_semigroup(path.string(), grid, table.density, closed);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(table.density[i] - closed[i]));
    std::cout << "wrote " << path.string() << ", sup-error = " << worst << '\n';
    return 0;
  }

  auto times = parse_t_grid(t_grid_spec);
  double tmax = times.back();
  double edge = 2.0 * std::sqrt(c + tmax);
  int ns = int(std::ceil(2.0 * (edge + 0.2) / ds)) + 1;
  auto s_grid = uniform_grid(-edge - 0.2, edge + 0.2, ns);
  auto flow = semicircle_flow(c, times, s_grid);
  auto residual = burgers_residual(flow);
  fs::path path = fs::path(opts.out) / "residual.csv";
  csv::write_residual(path.string(), residual);
  // Interior window |s| <= 1.8 sqrt(c+t); differencing degrades at the
  // square-root support edges outside it.
  double worst = 0.0;
  for (std::size_t i = 0; i < residual.residual.size(); ++i) {
    if (std::abs(residual.s[i]) <= 1.8 * std::sqrt(c + residual.t[i]))
      worst = std::max(worst, std::abs(residual.residual[i]));
  }
  std::cout << "wrote " << path.string() << ", max interior residual = " << worst
            << '\n';
  return 0;
}

int cmd_validate(const CommonOpts& opts, int samples) {
  ModelSpec model = build_model(opts);
  auto rep = validate_hypotheses(model, samples);
  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  worst="
              << format_double(c.worst) << (c.detail.empty() ? "" : "  " + c.detail)
              << '\n';
  }
  return rep.all_pass() ? 0 : 3;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"spectral density perturbation toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd, bool with_model) {
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)");
    cmd->add_option("--seed", opts.seed, "random seed");
    if (with_model) {
      cmd->add_option("--example", opts.example,
                      "built-in model: uniform-band | triangular-goe | semicircle-goe");
      cmd->add_option("--config", opts.config, "model config file (JSON)");
      cmd->add_option("--ell", opts.ell, "band width for uniform-band")
          ->check(CLI::Range(1e-9, 1.0));
      cmd->add_option("--c", opts.semicircle_c, "variance for semicircle-goe")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--semicircle-c", opts.semicircle_shortcut,
                      "shorthand: semicircle-goe model with this variance")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--resolution", opts.resolution, "model table resolution")
          ->check(CLI::Range(2, 1 << 22));
    }
  };

  int grid_n = 801;
  auto* theory = app.add_subcommand("theory", "tabulate the correction F and dF");
  add_common(theory, true);
  theory->add_option("--grid-n", grid_n, "grid points")->check(CLI::Range(16, 1 << 20));

  double eps = 0.0, smoothing_eta = -1.0;
  int solve_grid_n = 401;
  bool verbose = false;
  auto* solve = app.add_subcommand("solve", "solve the self-consistent equation, invert to a density");
  add_common(solve, true);
  solve->add_option("--eps", eps, "perturbation size")->check(CLI::NonNegativeNumber);
  solve->add_option("--smoothing-eta", smoothing_eta, "inversion height");
  solve->add_option("--grid-n", solve_grid_n, "grid points")->check(CLI::Range(16, 1 << 20));
  solve->add_flag("--verbose", verbose, "print solver diagnostics");

  int sim_n = 1000, replicates = 1, sim_grid_n = 401;
  double sim_eps = 0.01;
  auto* simulate = app.add_subcommand("simulate", "sample the finite-n ensemble and the CDF shift");
  add_common(simulate, true);
  simulate->add_option("--n", sim_n, "matrix size")->required()->check(CLI::Range(1, 100000));
  simulate->add_option("--eps", sim_eps, "perturbation size")->check(CLI::NonNegativeNumber);
  simulate->add_option("--replicates", replicates, "replicate count")->check(CLI::Range(1, 10000));
  simulate->add_option("--grid-n", sim_grid_n, "shift grid points")->check(CLI::Range(16, 1 << 20));

  double bc = 1.0, ds = 0.02, bt = 0.25, b_eta = 1e-3;
  std::string t_grid = "0:0.2:0.05";
  bool semigroup = false;
  auto* burgers = app.add_subcommand("burgers", "transport-equation residual and semigroup checks");
  add_common(burgers, false);
  burgers->add_option("--c", bc, "base semicircle variance")->required()->check(CLI::PositiveNumber);
  burgers->add_option("--t-grid", t_grid, "time grid lo:hi:step");
  burgers->add_option("--ds", ds, "s-grid spacing")->check(CLI::PositiveNumber);
  burgers->add_flag("--semigroup", semigroup, "run the semigroup check instead");
  burgers->add_option("--t", bt, "time for --semigroup")->check(CLI::PositiveNumber);
  burgers->add_option("--smoothing-eta", b_eta, "inversion height")->check(CLI::PositiveNumber);

  int val_samples = 1000;
  auto* validate = app.add_subcommand("validate", "run the hypothesis checks");
  add_common(validate, true);
  validate->add_option("--samples", val_samples, "sample count")->check(CLI::Range(16, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }

  try {
    if (app.got_subcommand(theory)) return cmd_theory(opts, grid_n);
    if (app.got_subcommand(solve))
      return cmd_solve(opts, eps, smoothing_eta, solve_grid_n, verbose);
    if (app.got_subcommand(simulate))
      return cmd_simulate(opts, sim_n, sim_eps, replicates, sim_grid_n);
    if (app.got_subcommand(burgers))
      return cmd_burgers(opts, bc, t_grid, ds, semigroup, bt, b_eta);
    if (app.got_subcommand(validate)) return cmd_validate(opts, val_samples);
  } catch (const hypothesis_error& e) {
    std::cerr << "hypothesis validation failed: " << e.what() << '\n';
    return 3;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace specden
