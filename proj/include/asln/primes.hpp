#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "asln/errors.hpp"

namespace asln {

/// Largest horizon accepted by the in-memory sieve and tables. Above this, use
/// the streaming prefix statistics in tables.hpp.
inline constexpr std::uint64_t kMaxHorizon = 100'000'000;

/// Smallest-prime-factor table on [0, N] together with the sorted primes.
struct PrimeTable {
  std::uint64_t N = 0;
  std::vector<std::uint32_t> spf;     // spf[n] for 2 <= n <= N; spf[0] = spf[1] = 0
  std::vector<std::uint32_t> primes;  // ascending, all primes <= N

  std::uint32_t smallest_prime_factor(std::uint64_t n) const {
    require(n >= 2 && n <= N, "smallest_prime_factor: index out of range");
    return spf[n];
  }
  bool is_prime(std::uint64_t n) const { return n >= 2 && n <= N && spf[n] == n; }

  /// Number of primes <= x (x may exceed nothing beyond N).
  std::size_t pi(std::uint64_t x) const {
    return static_cast<std::size_t>(
        std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
  }
};

/// Linear sieve: every composite is struck exactly once by its least prime.
inline PrimeTable build_prime_table(std::uint64_t N) {
  require(N >= 2, "build_prime_table: horizon must be at least 2");
  if (N > kMaxHorizon)
    throw CapacityError("build_prime_table: horizon " + std::to_string(N) +
                        " exceeds maximum " + std::to_string(kMaxHorizon));
  PrimeTable t;
  t.N = N;
  t.spf.assign(N + 1, 0);
  t.primes.reserve(static_cast<std::size_t>(1.3 * N / std::max(1.0, std::log(double(N)))) + 16);
  for (std::uint64_t i = 2; i <= N; ++i) {
    if (t.spf[i] == 0) {
      t.spf[i] = static_cast<std::uint32_t>(i);
      t.primes.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t lp = t.spf[i];
    for (std::uint32_t p : t.primes) {
      if (p > lp || i * p > N) break;
      t.spf[i * p] = p;
    }
  }
  return t;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
  };
  auto powmod = [&](std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    while (e) {
      if (e & 1) r = mulmod(r, b, m);
      b = mulmod(b, b, m);
      e >>= 1;
    }
    return r;
  };
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace asln
