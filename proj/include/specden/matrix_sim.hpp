#pragma once

#include <cstdint>
#include <vector>

#include "specden/model.hpp"

namespace specden {

// One draw of the perturbed ensemble: eigenvalues of
// diag(f(i/n)) + sqrt(eps/n) X with X symmetric Gaussian.
struct EnsembleSample {
  int n = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int replicate_id = 0;
  std::vector<double> eigenvalues;  // sorted ascending
};

struct EmpiricalCDF {
  std::vector<double> sorted;
  double operator()(double s) const;  // #{lambda <= s}/n, right-continuous
};

// a(i) = f(i/n), i = 1..n. With midpoint_indexing, f((i-1/2)/n) instead.
std::vector<double> build_diagonal(int n, const DiagonalSymbol& f,
                                   bool midpoint_indexing = false);

// Entries: x_ij ~ N(0, sigma^2(i/n, j/n)) for i<j, x_ii ~ N(0, 2 sigma^2),
// matching the GOE diagonal convention. eps = 0 skips the eigensolve and
// returns the sorted diagonal exactly. Deterministic in (seed, replicate_id).
EnsembleSample sample_perturbed(int n, double eps, const DiagonalSymbol& f,
                                const VarianceProfile& profile,
                                std::uint64_t seed, int replicate_id);
EnsembleSample sample_perturbed(int n, double eps, const ModelSpec& model,
                                std::uint64_t seed, int replicate_id);

struct ShiftTable {
  std::vector<double> s;
  std::vector<double> shift;  // (F_eps(s) - F_0(s)) / eps
};

ShiftTable cdf_shift(const EnsembleSample& sample, const EnsembleSample& baseline,
                     const std::vector<double>& grid);

struct AveragedShift {
  std::vector<double> s;
  std::vector<double> mean;
  std::vector<double> stderr_;  // sample std / sqrt(replicates)
};

AveragedShift replicate_average(const std::vector<EnsembleSample>& samples,
                                const EnsembleSample& baseline,
                                const std::vector<double>& grid);

// Run `replicates` draws with disjoint substreams, optionally in parallel;
// results are ordered by replicate id and independent of the thread count.
std::vector<EnsembleSample> sample_replicates(int n, double eps,
                                              const ModelSpec& model,
                                              std::uint64_t seed, int replicates,
                                              int threads = 1);

}  // namespace specden
