#include "specden/matrix_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "specden/common.hpp"
#include "specden/eigen_sym.hpp"
#include "specden/rng.hpp"

namespace specden {

double EmpiricalCDF::operator()(double s) const {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), s);
  return double(it - sorted.begin()) / double(sorted.size());
}

std::vector<double> build_diagonal(int n, const DiagonalSymbol& f,
                                   bool midpoint_indexing) {
  if (n < 1) throw std::invalid_argument("build_diagonal: n must be >= 1");
  std::vector<double> a(std::size_t(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    double x = midpoint_indexing ? (double(i) - 0.5) / n : double(i) / n;
    a[std::size_t(i - 1)] = f(x);
  }
  return a;
}

EnsembleSample sample_perturbed(int n, double eps, const DiagonalSymbol& f,
                                const VarianceProfile& profile,
                                std::uint64_t seed, int replicate_id) {
  if (n < 1) throw std::invalid_argument("sample_perturbed: n must be >= 1");
  if (!(eps >= 0.0)) throw std::invalid_argument("sample_perturbed: eps must be >= 0");

  EnsembleSample out;
  out.n = n;
  out.eps = eps;
  out.seed = seed;
  out.replicate_id = replicate_id;

  std::vector<double> diag = build_diagonal(n, f);
  if (eps == 0.0) {
    std::sort(diag.begin(), diag.end());
    out.eigenvalues = std::move(diag);
    return out;
  }

  GaussianStream rng(seed, std::uint64_t(replicate_id));
  const double scale = std::sqrt(eps / double(n));
  std::vector<double> a(std::size_t(n) * std::size_t(n), 0.0);
  // Lower triangle, row-major; variances sampled at (i/n, j/n) with 1-based
  // indices, diagonal doubled.
  for (int i = 0; i < n; ++i) {
    double* row = a.data() + std::size_t(i) * n;
    double xi = double(i + 1) / n;
    for (int j = 0; j < i; ++j) {
      double var = profile(xi, double(j + 1) / n);
      row[j] = scale * std::sqrt(var) * rng.next_gaussian();
    }
    double var_d = 2.0 * profile(xi, xi);
    row[i] = diag[std::size_t(i)] + scale * std::sqrt(var_d) * rng.next_gaussian();
  }

  out.eigenvalues = sym_eigenvalues_inplace(a.data(), n);
  for (double v : out.eigenvalues) {
    if (!std::isfinite(v)) throw numerical_error("sample_perturbed: non-finite eigenvalue");
  }
  return out;
}

EnsembleSample sample_perturbed(int n, double eps, const ModelSpec& model,
                                std::uint64_t seed, int replicate_id) {
  return sample_perturbed(n, eps, model.f, model.profile, seed, replicate_id);
}

ShiftTable cdf_shift(const EnsembleSample& sample, const EnsembleSample& baseline,
                     const std::vector<double>& grid) {
  if (sample.n != baseline.n)
    throw std::invalid_argument("cdf_shift: sample sizes differ");
  if (!(sample.eps > 0.0))
    throw std::invalid_argument("cdf_shift: sample.eps must be > 0");
  EmpiricalCDF fe{sample.eigenvalues}, f0{baseline.eigenvalues};
  ShiftTable out;
  out.s = grid;
  out.shift.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.shift[i] = (fe(grid[i]) - f0(grid[i])) / sample.eps;
  return out;
}

AveragedShift replicate_average(const std::vector<EnsembleSample>& samples,
                                const EnsembleSample& baseline,
                                const std::vector<double>& grid) {
  if (samples.empty())
    throw std::invalid_argument("replicate_average: need >= 1 samples");
  for (const auto& s : samples) {
    if (s.n != samples.front().n || s.eps != samples.front().eps)
      throw std::invalid_argument("replicate_average: heterogeneous samples");
  }
  const auto r = samples.size();
  const auto m = grid.size();
  AveragedShift out;
  out.s = grid;
  out.mean.assign(m, 0.0);
  out.stderr_.assign(m, 0.0);
  std::vector<std::vector<double>> curves;
  curves.reserve(r);
  for (const auto& s : samples) curves.push_back(cdf_shift(s, baseline, grid).shift);
  for (std::size_t i = 0; i < m; ++i) {
    double mean = 0.0;
    for (const auto& c : curves) mean += c[i];
    mean /= double(r);
    out.mean[i] = mean;
    if (r > 1) {
      double var = 0.0;
      for (const auto& c : curves) var += (c[i] - mean) * (c[i] - mean);
      var /= double(r - 1);
      out.stderr_[i] = std::sqrt(var / double(r));
    }
  }
  return out;
}

std::vector<EnsembleSample> sample_replicates(int n, double eps,
                                              const ModelSpec& model,
                                              std::uint64_t seed, int replicates,
                                              int threads) {
  if (replicates < 1)
    throw std::invalid_argument("sample_replicates: need >= 1 replicates");
  std::vector<EnsembleSample> out{std::size_t(replicates)};
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      for (int r = next.fetch_add(1); r < replicates; r = next.fetch_add(1))
        out[std::size_t(r)] = sample_perturbed(n, eps, model, seed, r);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  int nw = std::clamp(threads, 1, replicates);
  if (nw <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace specden
