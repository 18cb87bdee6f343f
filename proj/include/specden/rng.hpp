#pragma once

#include <cstdint>

namespace specden {

// Counter-style splitmix64: output k is mix(key + k * golden). Substreams for
// replicates are derived by re-mixing (seed, stream), so disjoint replicates
// never share state. Gaussians come from the polar Box-Muller method; the
// whole chain is plain uint64/IEEE arithmetic and reproducible for a fixed
// (seed, stream) pair.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_uniform();    // [0, 1)
  double next_gaussian();   // N(0, 1)

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace specden
