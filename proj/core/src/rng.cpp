#include "btrank/rng.hpp"

#include <cmath>
#include <limits>

namespace btrank {

std::int64_t Rng::next_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw InvalidArgumentError("next_int: empty range");
  }
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) {  // full 64-bit range
    return static_cast<std::int64_t>(next_u64());
  }
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

long Rng::poisson(double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidArgumentError("poisson rate must be positive");
  }
  if (lambda > 30.0) {
    const double half = lambda / 2.0;
    return poisson(half) + poisson(lambda - half);
  }
  const double threshold = std::exp(-lambda);
  long count = 0;
  double product = next_unit();
  while (product > threshold) {
    ++count;
    product *= next_unit();
  }
  return count;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  auto next = [&state] {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  next();
  return next();
}

}  // namespace btrank
