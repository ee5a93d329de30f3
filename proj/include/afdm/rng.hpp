// SPDX-License-Identifier: Apache-2.0
//
// Counter-based seed splitting. A root seed plus a tuple of counters maps to
// an independent engine, so a draw depends only on where it sits in the
// experiment and never on the order in which work is executed.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace afdm {

enum class Stream : std::uint64_t { Channel = 1, Noise = 2, Data = 3 };

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
  return Engine(derive_seed(root, keys));
}

}  // namespace afdm
