#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specden/common.hpp"
#include "specden/table.hpp"

namespace specden {

// ---------------------------------------------------------------------------
// Limit density of the diagonal spectrum.
// ---------------------------------------------------------------------------

enum class DensityKind { Uniform01, TriangularPulse, Semicircle, Tabulated };

class LimitDensity {
 public:
  static LimitDensity uniform01();
  static LimitDensity triangular_pulse();
  static LimitDensity semicircle(double variance);
  // Samples of the density on a uniform grid over [lo, hi]; normalized to
  // unit mass at construction. Rejects non-finite values and zero mass.
  static LimitDensity tabulated(double lo, double hi,
                                std::vector<double> values);

  DensityKind kind() const { return kind_; }
  double density(double s) const;
  double cdf(double s) const;
  // Generalized inverse CDF; p in [0,1].
  double quantile(double p) const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double variance_param() const { return variance_; }
  // Interior points where the density is not smooth.
  const std::vector<double>& breakpoints() const { return breaks_; }

  LimitDensity() = default;

 private:
  DensityKind kind_ = DensityKind::Uniform01;
  double lo_ = 0.0, hi_ = 1.0;
  double variance_ = 0.0;                 // Semicircle only
  UniformTable table_;                    // Tabulated: density samples
  UniformTable cdf_table_;                // Tabulated: cumulative mass
  std::vector<double> breaks_;
};

// ---------------------------------------------------------------------------
// Diagonal symbol f : [0,1] -> R.
// ---------------------------------------------------------------------------

enum class SymbolKind { Identity, Quantile, Tabulated };

class DiagonalSymbol {
 public:
  static DiagonalSymbol identity();
  static DiagonalSymbol tabulated(std::vector<double> values_on_01);

  SymbolKind kind() const { return kind_; }
  double operator()(double x) const;  // x clamped to [0,1]
  double bound() const { return bound_; }
  bool nondecreasing() const;
  // Inverse of a nondecreasing symbol, mapping spectrum back to [0,1].
  // For quantile symbols this is the source CDF (exact).
  double inverse(double s) const;
  const LimitDensity* source_density() const {
    return source_ ? source_.get() : nullptr;
  }

  friend DiagonalSymbol quantile_from_density(const LimitDensity& rho,
                                              int resolution);

  DiagonalSymbol() = default;

 private:
  SymbolKind kind_ = SymbolKind::Identity;
  double bound_ = 1.0;
  UniformTable table_;  // Quantile and Tabulated kinds
  std::shared_ptr<const LimitDensity> source_;
};

// Canonical monotone representative: f = generalized inverse CDF of rho,
// tabulated at `resolution`+1 points and evaluated by linear interpolation.
DiagonalSymbol quantile_from_density(const LimitDensity& rho, int resolution);

// ---------------------------------------------------------------------------
// Variance profile sigma^2 on [0,1]^2.
// ---------------------------------------------------------------------------

enum class ProfileKind { Constant, BandIndicator, Tabulated };

class VarianceProfile {
 public:
  static VarianceProfile constant(double c);
  static VarianceProfile band(double ell);
  // k x k row-major samples on [0,1]^2; must be symmetric and nonnegative.
  static VarianceProfile tabulated(std::size_t k, std::vector<double> values);

  ProfileKind kind() const { return kind_; }
  double operator()(double x, double y) const;
  double bound() const { return bound_; }
  double band_width() const { return ell_; }
  double constant_value() const { return const_; }

  VarianceProfile() = default;

 private:
  ProfileKind kind_ = ProfileKind::Constant;
  double bound_ = 1.0;
  double ell_ = 0.0;
  double const_ = 1.0;
  std::size_t k_ = 0;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Spectral kernel tau(s,t) = sigma^2(f^{-1}(s), f^{-1}(t)).
// ---------------------------------------------------------------------------

struct HolderParams {
  double alpha = 1.0;
  double c = -1.0;    // < 0: estimate by sampling
  double eta0 = -1.0; // < 0: 0.05 * support width
};

class SpectralKernel {
 public:
  // Direct construction from a symmetric callable (test and custom models).
  static SpectralKernel callable(std::function<double(double, double)> fn,
                                 double sup_bound, HolderParams hp = {});

  double operator()(double s, double t) const;
  double bound() const { return bound_; }

  double alpha() const { return alpha_; }
  double holder_c() const { return holder_c_; }
  double eta0() const { return eta0_; }

  // Jump/kink locations of t -> tau(s,t) for fixed s, within [lo, hi].
  std::vector<double> t_breakpoints(double s, double lo, double hi) const;
  // Spectrum points where s -> F(s) may be non-smooth (kernel part only).
  std::vector<double> s_breakpoints(double lo, double hi,
                                    const std::vector<double>& rho_breaks) const;

  friend SpectralKernel kernel_from_profile(const VarianceProfile& profile,
                                            const DiagonalSymbol& f,
                                            int resolution, HolderParams hp);

  SpectralKernel() = default;

 private:
  bool from_profile_ = false;
  VarianceProfile profile_;
  DiagonalSymbol f_;
  std::function<double(double, double)> fn_;
  double bound_ = 1.0;
  double alpha_ = 1.0, holder_c_ = 1.0, eta0_ = 0.05;
};

// tau(s,t) := sigma^2(f^{-1}(s), f^{-1}(t)) for a nondecreasing f. Rejects
// non-monotone symbols and asymmetric profiles. Holder constants not given
// in `hp` are estimated on a deterministic sample of size ~`resolution`.
SpectralKernel kernel_from_profile(const VarianceProfile& profile,
                                   const DiagonalSymbol& f, int resolution,
                                   HolderParams hp = {});

// ---------------------------------------------------------------------------
// Full model.
// ---------------------------------------------------------------------------

struct ModelSpec {
  DiagonalSymbol f;
  VarianceProfile profile;
  SpectralKernel kernel;
  LimitDensity rho;
  int resolution = 4096;

  double spectrum_bound() const { return f.bound(); }
};

ModelSpec make_model(const LimitDensity& rho, const VarianceProfile& profile,
                     int resolution = 4096, HolderParams hp = {});

// Built-in examples.
ModelSpec uniform_band_model(double ell, int resolution = 4096);
ModelSpec triangular_goe_model(int resolution = 4096);
ModelSpec semicircle_goe_model(double c, int resolution = 4096);

// ---------------------------------------------------------------------------
// Hypothesis validation (report-only).
// ---------------------------------------------------------------------------

struct HypothesisReport {
  struct Check {
    std::string name;
    bool pass = true;
    double worst = 0.0;
    std::string detail;
  };
  std::vector<Check> checks;
  bool all_pass() const;
};

HypothesisReport validate_hypotheses(const ModelSpec& model, int samples);

// FNV-1a over the canonical textual form of the model; used in run metadata.
std::uint64_t model_hash(const ModelSpec& model);

}  // namespace specden
