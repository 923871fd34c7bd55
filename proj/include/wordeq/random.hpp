#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace wordeq {

using Rng = std::mt19937_64;

// std::uniform_int_distribution is implementation-defined; generated
// benchmarks and random orderings must be identical across standard libraries.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - (kMax % n);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

template <typename T>
void shuffle_in_place(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace wordeq
