#pragma once

#include <cstdint>
#include <random>

#include "btrank/errors.hpp"

namespace btrank {

// mt19937_64 engine (bit-exact across standard libraries) with hand-rolled
// samplers, because std::*_distribution output is implementation-defined and
// would break reproducibility of seeded experiments across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer on [lo, hi], inclusive, via rejection.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return next_unit() < p; }

  // Knuth product method; large means split in half recursively so the
  // exp(-lambda) factor never underflows.
  long poisson(double lambda);

 private:
  std::mt19937_64 engine_;
};

// splitmix64 avalanche of (seed, stream): every replication of an experiment
// draws from its own stream, so serial and parallel schedules agree.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng replication_stream(std::uint64_t seed, std::uint64_t replication) {
  return Rng(mix_seed(seed, replication));
}

}  // namespace btrank
