#include "levershap/replay_buffer.hpp"

#include "levershap/error.hpp"

namespace levershap {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::uint64_t rng_seed)
    : capacity_(capacity), rng_seed_(rng_seed), rng_(rng_seed) {
  if (capacity == 0)
    throw InvalidArgumentError("replay buffer capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(t);
  } else {
    storage_[next_] = t;
    next_ = (next_ + 1) % capacity_;
  }
}

void ReplayBuffer::push(std::span<const Transition> transitions) {
  for (const Transition& t : transitions) push(t);
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= storage_.size())
    throw InvalidArgumentError("replay buffer index out of range");
  if (storage_.size() < capacity_) return storage_[i];
  return storage_[(next_ + i) % capacity_];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size,
                                             Rng& rng) const {
  if (storage_.empty())
    throw EmptyBufferError("cannot sample from an empty replay buffer");
  std::vector<Transition> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i)
    batch.push_back(storage_[rng.uniform_index(storage_.size())]);
  return batch;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size) {
  return static_cast<const ReplayBuffer&>(*this).sample(batch_size, rng_);
}

}  // namespace levershap
