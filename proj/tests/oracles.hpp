#pragma once

// Reference implementations used only by tests. They avoid the library code
// paths they check: trial division instead of the sieve, big-integer binomials
// instead of the residue DP, exhaustive path enumeration instead of the
// absorbing-barrier DP.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using boost::multiprecision::cpp_int;
using cplx = std::complex<double>;

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

/// Plain Eratosthenes over a bool array.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t N) {
  std::vector<bool> composite(N + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= N; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= N; j += i) composite[j] = true;
  }
  return out;
}

inline cplx additive_value(std::uint64_t n, const std::function<cplx(std::uint64_t)>& at_prime) {
  cplx s = 0;
  for (auto p : prime_factors(n)) s += at_prime(p);
  return s;
}

inline std::vector<cpp_int> binomial_row(unsigned n) {
  std::vector<cpp_int> row(n + 1);
  row[0] = 1;
  for (unsigned k = 1; k <= n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

/// 2^{-n} sum_{k = r mod d} C(n, k), exact numerator divided at the end.
inline double binomial_mod_prob(unsigned n, unsigned d, unsigned r) {
  const auto row = binomial_row(n);
  cpp_int num = 0;
  for (unsigned k = r; k <= n; k += d) num += row[k];
  return std::ldexp(num.convert_to<double>(), -static_cast<int>(n));
}

/// P{S_m >= ceil(rho m) for all 1 <= m <= N} by enumerating all 2^N paths,
/// with the line supplied as integer thresholds.
inline double stay_above_exhaustive(const std::vector<int>& line) {
  const unsigned N = static_cast<unsigned>(line.size());
  std::uint64_t good = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << N); ++bits) {
    int s = 0;
    bool ok = true;
    for (unsigned m = 0; m < N && ok; ++m) {
      s += static_cast<int>((bits >> m) & 1u);
      ok = s >= line[m];
    }
    if (ok) ++good;
  }
  return std::ldexp(static_cast<double>(good), -static_cast<int>(N));
}

}  // namespace oracle
