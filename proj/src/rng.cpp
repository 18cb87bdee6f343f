#include "specden/rng.hpp"

#include <cmath>

namespace specden {

std::uint64_t splitmix64_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream) {
  state_ = splitmix64_mix(splitmix64_mix(seed) ^ (stream * 0xA3EC647659359ACDULL + 1));
}

std::uint64_t GaussianStream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double GaussianStream::next_uniform() {
  return double(next_u64() >> 11) * 0x1p-53;
}

double GaussianStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, r2;
  do {
    u = 2.0 * next_uniform() - 1.0;
    v = 2.0 * next_uniform() - 1.0;
    r2 = u * u + v * v;
  } while (r2 >= 1.0 || r2 == 0.0);
  double m = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

}  // namespace specden
