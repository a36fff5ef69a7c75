#include "levershap/rng.hpp"

#include <cmath>

#include "levershap/error.hpp"

namespace levershap {

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw InvalidArgumentError("uniform_index: n must be positive");
  // rejection sampling to remove modulo bias
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

double Rng::normal(double mean, double stddev) {
  // u1 in (0, 1] keeps the log finite
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  constexpr double kTwoPi = 6.283185307179586476925287;
  return mean + stddev * radius * std::cos(kTwoPi * u2);
}

Rng named_stream(std::uint64_t root_seed, std::string_view name) {
  // FNV-1a over the name, folded into the root seed
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : name) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ull;
  }
  Rng mixer(root_seed ^ h);
  return Rng(mixer.next_u64());
}

}  // namespace levershap
