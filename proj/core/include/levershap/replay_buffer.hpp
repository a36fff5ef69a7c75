#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "levershap/rng.hpp"
#include "levershap/transition.hpp"

namespace levershap {

// Bounded FIFO transition store with uniform with-replacement sampling.
// Single writer; sampling needs a quiescent buffer.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity, std::uint64_t rng_seed = 0);

  void push(const Transition& t);
  void push(std::span<const Transition> transitions);

  // Uniform sample with replacement. Throws EmptyBufferError when empty.
  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;
  // Same, drawing from the buffer's own seeded stream.
  std::vector<Transition> sample(std::size_t batch_size);

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t rng_seed() const { return rng_seed_; }

  // Insertion-ordered access, oldest first.
  const Transition& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t next_ = 0;  // overwrite cursor once full
  std::uint64_t rng_seed_;
  Rng rng_;
};

}  // namespace levershap
