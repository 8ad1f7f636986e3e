#include "gearquest/rng.hpp"

namespace gearquest {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const { return bits(counter, 0); }

std::uint64_t CounterRng::bits(std::uint64_t counter, std::uint64_t lane) const {
  // Two rounds keep nearby (key, counter, lane) triples decorrelated.
  const std::uint64_t a = splitmix64(key_ ^ splitmix64(lane + 0x632be59bd9b4e019ULL));
  return splitmix64(a + splitmix64(counter));
}

double CounterRng::uniform(std::uint64_t counter, std::uint64_t lane) const {
  return static_cast<double>(bits(counter, lane) >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t counter, std::uint64_t bound) const {
  // Modulo bias is below 2^-32 for the small bounds used here.
  return bits(counter) % bound;
}

}  // namespace gearquest
