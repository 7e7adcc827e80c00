#pragma once

#include <cstdint>

#include "conicond/matrix.hpp"

namespace conicond {

/// Counter-based generator: every output is a pure function of
/// (seed, stream, counter), so per-trial streams are reproducible no matter
/// how work is scheduled. The mixing function is SplitMix64.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal via Box-Muller.
  double gaussian();
  std::size_t below(std::size_t bound);

  Vector gaussian_vector(std::size_t n);
  Vector unit_vector(std::size_t n);
  Matrix gaussian_matrix(std::size_t rows, std::size_t cols);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace conicond
