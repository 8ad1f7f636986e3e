#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gearquest {

// Counter-based generator: every draw is a pure function of (key, counter),
// so any draw can be reproduced without replaying the ones before it.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t bits(std::uint64_t counter) const;
  std::uint64_t bits(std::uint64_t counter, std::uint64_t lane) const;
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform(std::uint64_t counter, std::uint64_t lane = 0) const;
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Fisher-Yates shuffle driven by CounterRng so results do not depend on the
// standard library's shuffle implementation.
template <typename T>
void seeded_shuffle(std::vector<T>& values, std::uint64_t seed) {
  const CounterRng rng(seed);
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace gearquest
