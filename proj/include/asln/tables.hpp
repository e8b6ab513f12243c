#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "asln/additive.hpp"
#include "asln/errors.hpp"
#include "asln/numeric.hpp"
#include "asln/primes.hpp"

namespace asln {

/// Sieved values and cumulative statistics of an additive function on [1, N].
///
/// Every array has length N + 1 and index n holds the value at n; slot 0 is
/// zero (empty prefix).
struct ArithmeticTables {
  std::uint64_t N = 0;
  std::vector<cplx> f;    // f(n) = sum_{p | n} f(p)
  std::vector<cplx> F;    // sum_{m <= n} f(m)
  std::vector<double> G;  // sum_{m <= n} |f(m)|^2
  std::vector<cplx> S_A;  // sum_{p <= n} f(p) / p
  std::vector<double> B;  // sum_{p <= n} |f(p)|^2 / p
  bool real_valued = true;
  bool nonnegative = true;
  std::string spec_name;

  double A(std::uint64_t n) const { return std::abs(S_A[n]); }
};

/// Evaluates a strongly additive function by walking smallest prime factors:
/// f(n) = f(n / p^k) + f(p) with p = spf(n), so each prime divisor is counted
/// once regardless of multiplicity.
inline ArithmeticTables eval_additive(const AdditiveFunctionSpec& spec, const PrimeTable& primes,
                                      std::uint64_t N) {
  if (!spec.additive())
    throw PreconditionError("eval_additive: '" + spec.name() + "' is not strongly additive");
  require(N >= 1 && N <= primes.N, "eval_additive: horizon exceeds prime table");
  ArithmeticTables t;
  t.N = N;
  t.real_valued = spec.real_valued();
  t.nonnegative = spec.nonnegative();
  t.spec_name = spec.name();
  t.f.assign(N + 1, 0.0);
  t.F.assign(N + 1, 0.0);
  t.G.assign(N + 1, 0.0);
  t.S_A.assign(N + 1, 0.0);
  t.B.assign(N + 1, 0.0);

  for (std::uint64_t n = 2; n <= N; ++n) {
    const std::uint64_t p = primes.spf[n];
    if (p == n) {
      t.f[n] = spec.at_prime(p);
      continue;
    }
    std::uint64_t m = n / p;
    while (m % p == 0) m /= p;
    t.f[n] = t.f[m] + t.f[p];
  }

  Neumaier<cplx> F, SA;
  Neumaier<double> G, B;
  for (std::uint64_t n = 1; n <= N; ++n) {
    F += t.f[n];
    G += std::norm(t.f[n]);
    if (primes.is_prime(n)) {
      const double inv = 1.0 / static_cast<double>(n);
      SA += t.f[n] * inv;
      B += std::norm(t.f[n]) * inv;
    }
    t.F[n] = F.value();
    t.G[n] = G.value();
    t.S_A[n] = SA.value();
    t.B[n] = B.value();
  }
  return t;
}

/// F(n) through the prime expansion sum_{p <= n} f(p) floor(n / p).
inline cplx F_via_primes(const ArithmeticTables& t, const PrimeTable& primes, std::uint64_t n) {
  require(n <= t.N && n <= primes.N, "F_via_primes: n beyond horizon");
  Neumaier<cplx> acc;
  for (std::uint32_t p : primes.primes) {
    if (p > n) break;
    acc += t.f[p] * static_cast<double>(n / p);
  }
  return acc.value();
}

/// G(n) through the prime expansion, diagonal plus the cross term over p < q;
/// pairs with pq > n contribute nothing and are skipped.
inline double G_via_primes(const ArithmeticTables& t, const PrimeTable& primes, std::uint64_t n) {
  require(n <= t.N && n <= primes.N, "G_via_primes: n beyond horizon");
  Neumaier<double> diag;
  Neumaier<cplx> cross;
  const auto& ps = primes.primes;
  for (std::size_t i = 0; i < ps.size() && ps[i] <= n; ++i) {
    const std::uint64_t p = ps[i];
    diag += std::norm(t.f[p]) * static_cast<double>(n / p);
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const std::uint64_t q = ps[j];
      if (p * q > n) break;
      cross += t.f[p] * std::conj(t.f[q]) * static_cast<double>(n / (p * q));
    }
  }
  return diag.value() + 2.0 * cross.value().real();
}

/// Evaluates the prime expansions of F and G for many n at O(sqrt n) cost
/// each, by grouping the floor(n / d) factors into blocks of equal quotient.
/// Uses only prime values of f, never the sieved prefix sums.
class PrimeExpansion {
 public:
  PrimeExpansion(const ArithmeticTables& t, const PrimeTable& primes) : N_(t.N) {
    require(t.N <= primes.N, "PrimeExpansion: prime table too short");
    std::vector<cplx> lin(N_ + 1, 0.0), semi(N_ + 1, 0.0);
    std::vector<double> sq(N_ + 1, 0.0);
    const auto& ps = primes.primes;
    for (std::size_t i = 0; i < ps.size() && ps[i] <= N_; ++i) {
      const std::uint64_t p = ps[i];
      lin[p] = t.f[p];
      sq[p] = std::norm(t.f[p]);
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        const std::uint64_t q = ps[j];
        if (p * q > N_) break;
        semi[p * q] = t.f[p] * std::conj(t.f[q]);  // each squarefree pq has one factorisation
      }
    }
    lin_ = prefix(lin);
    semi_ = prefix(semi);
    sq_.assign(N_ + 1, 0.0);
    Neumaier<double> acc;
    for (std::uint64_t d = 1; d <= N_; ++d) {
      acc += sq[d];
      sq_[d] = acc.value();
    }
  }

  cplx F(std::uint64_t n) const { return blocked(lin_, n); }

  double G(std::uint64_t n) const {
    require(n <= N_, "PrimeExpansion::G: n beyond horizon");
    Neumaier<double> diag;
    for (std::uint64_t lo = 1; lo <= n;) {
      const std::uint64_t q = n / lo, hi = n / q;
      diag += static_cast<double>(q) * (sq_[hi] - sq_[lo - 1]);
      lo = hi + 1;
    }
    return diag.value() + 2.0 * blocked(semi_, n).real();
  }

 private:
  static std::vector<cplx> prefix(const std::vector<cplx>& v) {
    std::vector<cplx> out(v.size(), 0.0);
    Neumaier<cplx> acc;
    for (std::size_t d = 1; d < v.size(); ++d) {
      acc += v[d];
      out[d] = acc.value();
    }
    return out;
  }

  cplx blocked(const std::vector<cplx>& pre, std::uint64_t n) const {
    require(n <= N_, "PrimeExpansion: n beyond horizon");
    Neumaier<cplx> acc;
    for (std::uint64_t lo = 1; lo <= n;) {
      const std::uint64_t q = n / lo, hi = n / q;
      acc += static_cast<double>(q) * (pre[hi] - pre[lo - 1]);
      lo = hi + 1;
    }
    return acc.value();
  }

  std::uint64_t N_;
  std::vector<cplx> lin_, semi_;
  std::vector<double> sq_;
};

// -----------------------------------------------------------------------------
// Inequalities for nonnegative real f
// -----------------------------------------------------------------------------

struct SandwichCheck {
  std::uint64_t n;
  double lower;  // (c/2) n A_{floor(c^2 n)}
  double F;
  double upper;  // n A_n
  double G;
  double G_bound;  // n (B_n + A_n^2)
  bool ok() const { return lower <= F && F <= upper && G <= G_bound; }
};

/// Two-sided bound on F and the upper bound on G for nonnegative f, with
/// 0 < c <= 1/2.
inline SandwichCheck sandwich_at(const ArithmeticTables& t, std::uint64_t n, double c = 0.5) {
  require(t.nonnegative, "sandwich_at: requires a nonnegative real function");
  require(c > 0 && c <= 0.5, "sandwich_at: c must lie in (0, 1/2]");
  require(n >= 1 && n <= t.N, "sandwich_at: n beyond horizon");
  const double nd = static_cast<double>(n);
  const auto m = static_cast<std::uint64_t>(std::floor(c * c * nd));
  SandwichCheck s;
  s.n = n;
  s.lower = 0.5 * c * nd * t.A(m);
  s.F = t.F[n].real();
  s.upper = nd * t.A(n);
  s.G = t.G[n];
  s.G_bound = nd * (t.B[n] + t.A(n) * t.A(n));
  return s;
}

// -----------------------------------------------------------------------------
// Streaming mode for horizons beyond the in-memory tables
// -----------------------------------------------------------------------------

struct PrefixStats {
  std::uint64_t n = 0;
  cplx F{};
  double G = 0;
  cplx S_A{};
  double B = 0;
};

/// Prefix statistics at the requested checkpoints, computed with a segmented
/// sieve: memory is O(sqrt N + segment) instead of O(N).
inline std::vector<PrefixStats> stream_prefix_stats(const AdditiveFunctionSpec& spec,
                                                    std::vector<std::uint64_t> checkpoints,
                                                    std::uint64_t segment = 1u << 18) {
  if (!spec.additive())
    throw PreconditionError("stream_prefix_stats: '" + spec.name() + "' is not strongly additive");
  require(!checkpoints.empty(), "stream_prefix_stats: no checkpoints");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  require(checkpoints.front() >= 1, "stream_prefix_stats: checkpoints must be positive");
  const std::uint64_t N = checkpoints.back();
  require(N <= (std::uint64_t{1} << 40), "stream_prefix_stats: horizon too large");

  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N)));
  while (root * root > N) --root;
  while ((root + 1) * (root + 1) <= N) ++root;
  const PrimeTable small = build_prime_table(std::max<std::uint64_t>(root, 2));
  std::vector<cplx> small_f(small.primes.size());
  for (std::size_t i = 0; i < small.primes.size(); ++i) small_f[i] = spec.at_prime(small.primes[i]);

  std::vector<PrefixStats> out;
  out.reserve(checkpoints.size());
  std::size_t next = 0;
  Neumaier<cplx> F, SA;
  Neumaier<double> G, B;
  std::vector<std::uint64_t> rest(segment);
  std::vector<cplx> fv(segment);

  for (std::uint64_t lo = 1; lo <= N; lo += segment) {
    const std::uint64_t hi = std::min(N, lo + segment - 1);
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    for (std::size_t i = 0; i < len; ++i) {
      rest[i] = lo + i;
      fv[i] = 0.0;
    }
    for (std::size_t k = 0; k < small.primes.size(); ++k) {
      const std::uint64_t p = small.primes[k];
      if (p > hi) break;
      std::uint64_t first = ((lo + p - 1) / p) * p;
      for (std::uint64_t m = first; m <= hi; m += p) {
        const std::size_t i = static_cast<std::size_t>(m - lo);
        fv[i] += small_f[k];
        do rest[i] /= p;
        while (rest[i] % p == 0);
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint64_t n = lo + i;
      // A cofactor > 1 left after removing primes <= sqrt(N) is a single prime.
      if (rest[i] > 1) fv[i] += spec.at_prime(rest[i]);
      const bool prime = n >= 2 && (rest[i] == n || (n <= small.N && small.is_prime(n)));
      F += fv[i];
      G += std::norm(fv[i]);
      if (prime) {
        const double inv = 1.0 / static_cast<double>(n);
        SA += fv[i] * inv;
        B += std::norm(fv[i]) * inv;
      }
      while (next < checkpoints.size() && checkpoints[next] == n) {
        out.push_back({n, F.value(), G.value(), SA.value(), B.value()});
        ++next;
      }
    }
  }
  return out;
}

}  // namespace asln
