#include "specden/table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specden {

UniformTable::UniformTable(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (!(hi_ > lo_)) throw std::invalid_argument("table: hi must exceed lo");
  if (values_.size() < 2) throw std::invalid_argument("table: need >= 2 values");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("table: non-finite value");
  }
  step_ = (hi_ - lo_) / double(values_.size() - 1);
}

double UniformTable::operator()(double x) const {
  if (x <= lo_) return values_.front();
  if (x >= hi_) return values_.back();
  double r = (x - lo_) / step_;
  auto i = std::size_t(r);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  double w = r - double(i);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

bool UniformTable::nondecreasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1]) return false;
  }
  return true;
}

double UniformTable::inverse(double y) const {
  if (y <= values_.front()) return lo_;
  if (y >= values_.back()) return hi_;
  auto it = std::lower_bound(values_.begin(), values_.end(), y);
  auto i = std::size_t(it - values_.begin());
  // values_[i-1] < y <= values_[i]
  double v0 = values_[i - 1], v1 = values_[i];
  double w = (v1 > v0) ? (y - v0) / (v1 - v0) : 1.0;
  return arg_at(i - 1) + w * step_;
}

}  // namespace specden
