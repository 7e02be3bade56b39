#ifndef COUPLING_RNG_HPP
#define COUPLING_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "coupling/numeric.hpp"

namespace coupling {

// Seedable, platform-stable generator: mt19937_64 raw output is specified
// bit-for-bit by the standard, and all derived draws below use only integer
// arithmetic plus exact dyadic scaling, so traces are identical across
// platforms for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // 53-bit mantissa in [1, 2^53); zero is rejected so both views below lie
  // strictly inside (0,1).
  std::uint64_t next_unit_bits() {
    for (;;) {
      std::uint64_t m = engine_() >> 11;
      if (m != 0) return m;
    }
  }

  static double unit_from_bits(std::uint64_t m) {
    return static_cast<double>(m) * 0x1p-53;
  }

  static Rat exact_unit_from_bits(std::uint64_t m) {
    return Rat(Int(m), Int(1) << 53);
  }

  double next_unit_open() { return unit_from_bits(next_unit_bits()); }

  // Cumulative-weight inversion over `weights` (positive, summing to 1).
  // The uniform draw is compared exactly against rational partial sums.
  std::size_t pick_index(const std::vector<Rat>& weights) {
    Rat u = exact_unit_from_bits(next_unit_bits());
    Rat acc = 0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace coupling

#endif
