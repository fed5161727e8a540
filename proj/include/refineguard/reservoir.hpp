#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace refineguard {

// Classic reservoir sampling: after n offers, each offer is resident with
// probability capacity/n, using one RNG draw per offer past the fill phase.
template <typename T>
class ReservoirSampler {
 public:
  explicit ReservoirSampler(std::size_t capacity, std::uint64_t seed)
      : capacity_(capacity), rng_(seed) {}

  void offer(T item) {
    ++seen_;
    if (slots_.size() < capacity_) {
      slots_.push_back(std::move(item));
      return;
    }
    if (capacity_ == 0) return;
    std::uniform_int_distribution<std::uint64_t> pick(0, seen_ - 1);
    std::uint64_t j = pick(rng_);
    if (j < capacity_) slots_[static_cast<std::size_t>(j)] = std::move(item);
  }

  const std::vector<T>& slots() const { return slots_; }
  std::uint64_t seen() const { return seen_; }
  std::size_t capacity() const { return capacity_; }

  void reset() {
    slots_.clear();
    seen_ = 0;
  }

 private:
  std::size_t capacity_;
  std::uint64_t seen_ = 0;
  std::vector<T> slots_;
  std::mt19937_64 rng_;
};

}  // namespace refineguard
