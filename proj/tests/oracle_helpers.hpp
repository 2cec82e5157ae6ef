#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <cstdint>
#include <vector>

#include "taubound/precision.hpp"

namespace taubound::test {

// deterministic 64-bit generator (splitmix64)
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// plain (unsegmented) sieve, written independently of sieve_upto
inline std::vector<std::uint64_t> naive_sieve(std::uint64_t limit) {
  std::vector<bool> comp(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
    }
  }
  return out;
}

// minimal divisor count by full divisor enumeration
inline std::uint64_t naive_tau(std::uint64_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) count += (d * d == n) ? 1 : 2;
  }
  return count;
}

}  // namespace taubound::test
