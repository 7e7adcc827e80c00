#include "conicond/rng.hpp"

#include <cmath>
#include <numbers>

namespace conicond {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + (++counter_) * 0xD1B54A32D192ED03ULL); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::size_t CounterRng::below(std::size_t bound) { return static_cast<std::size_t>(uniform() * bound) % bound; }

Vector CounterRng::gaussian_vector(std::size_t n) {
  Vector v(n);
  for (double& x : v) x = gaussian();
  return v;
}

Vector CounterRng::unit_vector(std::size_t n) {
  for (;;) {
    Vector v = gaussian_vector(n);
    const double nv = norm(v);
    if (nv > 1e-12) return scaled(v, 1.0 / nv);
  }
}

Matrix CounterRng::gaussian_matrix(std::size_t rows, std::size_t cols) {
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = gaussian();
  return a;
}

}  // namespace conicond
