#pragma once

#include <cstdint>
#include <string_view>

namespace levershap {

// Small deterministic PRNG (splitmix64 core) with hand-rolled distributions.
// The standard <random> distributions are implementation-defined, which would
// make seeded runs differ across standard libraries; everything here is fully
// specified so a seed pins the exact byte stream of every output file.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Unbiased uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Gaussian via Box-Muller; two uniforms per draw, no cached spare.
  double normal(double mean, double stddev);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream from a root seed and a stream name, so env
// sampling, exploration, relabeling and evaluation draw from separate streams.
Rng named_stream(std::uint64_t root_seed, std::string_view name);

}  // namespace levershap
