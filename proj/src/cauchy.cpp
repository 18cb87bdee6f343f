#include "specden/cauchy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "specden/common.hpp"
#include "specden/simd/kernels.hpp"

namespace specden {

namespace {

enum class IntegralKind { Constant, Band, General };

// One (f, profile) discretization shared across solves; solve() is const and
// safe to call concurrently.
class FieldProblem {
 public:
  FieldProblem(const DiagonalSymbol& f, const VarianceProfile& profile, int nodes)
      : n_(std::size_t(std::max(nodes, 8))) {
    x_.resize(n_);
    fvals_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      x_[i] = (double(i) + 0.5) / double(n_);
      fvals_[i] = f(x_[i]);
    }
    switch (profile.kind()) {
      case ProfileKind::Constant:
        kind_ = IntegralKind::Constant;
        const_ = profile.constant_value();
        break;
      case ProfileKind::BandIndicator:
        kind_ = IntegralKind::Band;
        window_ = std::size_t(std::floor(profile.band_width() * double(n_) + 1e-12));
        break;
      case ProfileKind::Tabulated:
        kind_ = IntegralKind::General;
        k_.resize(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = 0; j < n_; ++j) k_[i * n_ + j] = profile(x_[i], x_[j]);
        break;
    }
  }

  std::size_t nodes() const { return n_; }
  const std::vector<double>& x_grid() const { return x_; }

  CauchyField solve(double eps, std::complex<double> z, const SolverConfig& cfg,
                    const std::vector<std::complex<double>>* warm) const {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("solve_field: Im z must be > 0");
    if (!(eps >= 0.0)) throw std::invalid_argument("solve_field: eps must be >= 0");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("solve_field: tol must be > 0");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
      throw std::invalid_argument("solve_field: damping must be in (0,1]");

    const double inv_imz = 1.0 / z.imag();
    std::vector<double> re(n_), im(n_);
    if (warm && warm->size() == n_) {
      for (std::size_t i = 0; i < n_; ++i) {
        re[i] = (*warm)[i].real();
        im[i] = (*warm)[i].imag();
      }
    } else {
      for (std::size_t i = 0; i < n_; ++i) {
        std::complex<double> c = 1.0 / (z - fvals_[i]);
        re[i] = c.real();
        im[i] = c.imag();
      }
    }

    CauchyField out;
    out.x_grid = x_;
    out.z = z;
    out.eps = eps;

    std::vector<double> int_re(n_), int_im(n_);
    const double beta = cfg.damping;
    double residual = HUGE_VAL;
    int iter = 0;
    while (iter < cfg.max_iter) {
      ++iter;
      integral(re, im, int_re, int_im);
      residual = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        std::complex<double> denom(z.real() - fvals_[i] - eps * int_re[i],
                                   z.imag() - eps * int_im[i]);
        std::complex<double> cand = 1.0 / denom;
        if (cfg.check_invariants) {
          if (!(std::abs(cand) <= inv_imz * (1.0 + 1e-12)) || !(cand.imag() < 0.0))
            throw numerical_error("solve_field: iterate left the admissible set");
        }
        double dre = cand.real() - re[i], dim = cand.imag() - im[i];
        residual = std::max(residual, std::hypot(dre, dim));
        re[i] += beta * dre;
        im[i] += beta * dim;
      }
      if (cfg.track_residuals) out.residual_history.push_back(residual);
      if (residual <= cfg.tol) break;
    }

    out.iterations = iter;
    out.residual = residual;
    out.converged = residual <= cfg.tol;
    if (!out.converged) {
      std::ostringstream msg;
      msg << "solve_field: no convergence after " << iter << " iterations at z = ("
          << z.real() << ", " << z.imag() << "), eps = " << eps
          << ", last residual = " << residual
          << "; consider raising Im z or lowering damping";
      throw numerical_error(msg.str());
    }
    out.values.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out.values[i] = {re[i], im[i]};
    return out;
  }

 private:
  void integral(const std::vector<double>& re, const std::vector<double>& im,
                std::vector<double>& out_re, std::vector<double>& out_im) const {
    const double h = 1.0 / double(n_);
    switch (kind_) {
      case IntegralKind::Constant: {
        double sr = 0.0, si = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
          sr += re[i];
          si += im[i];
        }
        sr *= const_ * h;
        si *= const_ * h;
        for (std::size_t i = 0; i < n_; ++i) {
          out_re[i] = sr;
          out_im[i] = si;
        }
        break;
      }
      case IntegralKind::Band: {
        // Moving-window sums via prefix sums; the window is |i-j| <= window_.
        std::vector<double> pre_r(n_ + 1, 0.0), pre_i(n_ + 1, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
          pre_r[i + 1] = pre_r[i] + re[i];
          pre_i[i + 1] = pre_i[i] + im[i];
        }
        for (std::size_t i = 0; i < n_; ++i) {
          std::size_t lo = i > window_ ? i - window_ : 0;
          std::size_t hi = std::min(n_, i + window_ + 1);
          out_re[i] = (pre_r[hi] - pre_r[lo]) * h;
          out_im[i] = (pre_i[hi] - pre_i[lo]) * h;
        }
        break;
      }
      case IntegralKind::General: {
        const auto& kr = simd::active();
        for (std::size_t i = 0; i < n_; ++i) {
          auto [sr, si] = kr.dot_dual(&k_[i * n_], re.data(), im.data(), n_);
          out_re[i] = sr * h;
          out_im[i] = si * h;
        }
        break;
      }
    }
  }

  std::size_t n_;
  IntegralKind kind_ = IntegralKind::Constant;
  double const_ = 0.0;
  std::size_t window_ = 0;
  std::vector<double> x_, fvals_, k_;
};

}  // namespace

CauchyField solve_field(const DiagonalSymbol& f, const VarianceProfile& profile,
                        double eps, std::complex<double> z,
                        const SolverConfig& cfg,
                        const std::vector<std::complex<double>>* warm) {
  FieldProblem prob(f, profile, cfg.x_nodes);
  return prob.solve(eps, z, cfg, warm);
}

CauchyField solve_field(const ModelSpec& model, double eps,
                        std::complex<double> z, const SolverConfig& cfg) {
  return solve_field(model.f, model.profile, eps, z, cfg, nullptr);
}

std::complex<double> cauchy_transform(const CauchyField& field) {
  if (!field.converged) throw numerical_error("cauchy_transform: field did not converge");
  std::complex<double> acc = 0.0;
  for (auto v : field.values) acc += v;
  return acc / double(field.values.size());
}

DensityTable stieltjes_invert(const DiagonalSymbol& f,
                              const VarianceProfile& profile, double eps,
                              const std::vector<double>& s_grid,
                              double smoothing_eta, const SolverConfig& cfg,
                              int threads, SolveDiagnostics* diag) {
  if (!(smoothing_eta > 0.0))
    throw std::invalid_argument("stieltjes_invert: smoothing_eta must be > 0");
  const std::size_t n = s_grid.size();
  if (n < 2) throw std::invalid_argument("stieltjes_invert: need >= 2 grid points");

  FieldProblem prob(f, profile, cfg.x_nodes);
  DensityTable out;
  out.s = s_grid;
  out.density.assign(n, 0.0);
  out.cdf.assign(n, 0.0);
  out.smoothing_eta = smoothing_eta;
  if (diag) {
    diag->iterations.assign(n, 0);
    diag->residuals.assign(n, 0.0);
  }

  // Fixed 64-point chunks, each warm-started internally: the result is
  // independent of how many workers process them.
  constexpr std::size_t kChunk = 64;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    try {
      for (std::size_t c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1)) {
        std::vector<std::complex<double>> warm;
        const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
        for (std::size_t i = lo; i < hi; ++i) {
          std::complex<double> z(s_grid[i], smoothing_eta);
          CauchyField field =
              prob.solve(eps, z, cfg, warm.empty() ? nullptr : &warm);
          warm = field.values;
          out.density[i] = -cauchy_transform(field).imag() / std::numbers::pi;
          if (diag) {
            diag->iterations[i] = field.iterations;
            diag->residuals[i] = field.residual;
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  int nw = std::clamp(threads, 1, int(nchunks));
  if (nw <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 1; i < n; ++i) {
    out.cdf[i] = out.cdf[i - 1] + 0.5 * (out.density[i - 1] + out.density[i]) *
                                      (s_grid[i] - s_grid[i - 1]);
  }
  return out;
}

DensityTable stieltjes_invert(const ModelSpec& model, double eps,
                              const std::vector<double>& s_grid,
                              double smoothing_eta, const SolverConfig& cfg,
                              int threads, SolveDiagnostics* diag) {
  return stieltjes_invert(model.f, model.profile, eps, s_grid, smoothing_eta,
                          cfg, threads, diag);
}

std::complex<double> first_order_slope(const ModelSpec& model,
                                       std::complex<double> z,
                                       const std::vector<double>& eps_list,
                                       const SolverConfig& cfg) {
  if (eps_list.size() < 2)
    throw std::invalid_argument("first_order_slope: need >= 2 eps values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0))
      throw std::invalid_argument("first_order_slope: eps values must be > 0");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("first_order_slope: eps values must decrease");
  }

  FieldProblem prob(model.f, model.profile, cfg.x_nodes);
  CauchyField base = prob.solve(0.0, z, cfg, nullptr);
  std::complex<double> c0 = cauchy_transform(base);

  const auto m = eps_list.size();
  std::vector<std::complex<double>> slope(m);
  for (std::size_t k = 0; k < m; ++k) {
    CauchyField fk = prob.solve(eps_list[k], z, cfg, &base.values);
    slope[k] = (cauchy_transform(fk) - c0) / eps_list[k];
  }

  // Neville extrapolation of slope(eps) to eps = 0.
  std::vector<std::complex<double>> t = slope;
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t k = 0; k + level < m; ++k) {
      double x0 = eps_list[k], x1 = eps_list[k + level];
      t[k] = (x0 * t[k + 1] - x1 * t[k]) / (x0 - x1);
    }
  }
  return t[0];
}

}  // namespace specden
