#pragma once

#include <cstddef>
#include <vector>

namespace specden {

// Uniformly spaced samples on [lo, hi] with linear interpolation.
// Evaluation clamps to the endpoints.
class UniformTable {
 public:
  UniformTable() = default;
  UniformTable(double lo, double hi, std::vector<double> values);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return values_.size(); }
  double step() const { return step_; }
  const std::vector<double>& values() const { return values_; }

  double arg_at(std::size_t i) const { return lo_ + step_ * double(i); }
  double value_at(std::size_t i) const { return values_[i]; }

  double operator()(double x) const;

  bool nondecreasing() const;

  // Inverse of a nondecreasing table: smallest x with table(x) >= y,
  // linearly interpolated. y is clamped to the value range.
  double inverse(double y) const;

 private:
  double lo_ = 0.0, hi_ = 1.0, step_ = 1.0;
  std::vector<double> values_;
};

}  // namespace specden
