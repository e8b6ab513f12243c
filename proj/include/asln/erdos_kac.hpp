#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "asln/errors.hpp"
#include "asln/tables.hpp"

namespace asln {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct ErdosKacResult {
  std::uint64_t N = 0;
  double A = 0;  // sum_{p <= N} f(p) / p (real)
  double B = 0;  // sum_{p <= N} f(p)^2 / p
  double ks_distance = 0;
  double ks_at = 0;  // standardised abscissa where the sup is attained
  std::vector<double> z;     // ECDF evaluation points
  std::vector<double> ecdf;  // empirical P{(f(n) - A) / sqrt(B) <= z}
};

/// Empirical law of (f(n) - A_N) / B_N^{1/2} over 1 <= n <= N and its
/// Kolmogorov-Smirnov distance to the standard normal. The supremum runs over
/// both sides of every jump of the empirical CDF.
inline ErdosKacResult erdos_kac_empirical(const ArithmeticTables& t, std::uint64_t N, int bins = 81) {
  require(t.real_valued, "erdos_kac_empirical: requires a real-valued function");
  require(N >= 1 && N <= t.N, "erdos_kac_empirical: N beyond horizon");
  require(bins >= 2, "erdos_kac_empirical: need at least two bins");
  ErdosKacResult r;
  r.N = N;
  r.A = t.S_A[N].real();
  r.B = t.B[N];
  if (!(r.B > 0)) throw DegenerateError("erdos_kac_empirical: B_N = 0");
  const double scale = 1.0 / std::sqrt(r.B);

  std::vector<double> v(N);
  for (std::uint64_t n = 1; n <= N; ++n) v[n - 1] = (t.f[n].real() - r.A) * scale;
  std::sort(v.begin(), v.end());
  const double total = static_cast<double>(N);
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double phi = normal_cdf(v[i]);
    const double below = static_cast<double>(i) / total;  // left limit
    const double at = static_cast<double>(j) / total;
    const double d = std::max(std::abs(phi - below), std::abs(at - phi));
    if (d > r.ks_distance) {
      r.ks_distance = d;
      r.ks_at = v[i];
    }
    i = j;
  }
  r.z.resize(bins);
  r.ecdf.resize(bins);
  for (int b = 0; b < bins; ++b) {
    const double z = -4.0 + 8.0 * b / (bins - 1);
    r.z[b] = z;
    r.ecdf[b] = static_cast<double>(std::upper_bound(v.begin(), v.end(), z) - v.begin()) / total;
  }
  return r;
}

}  // namespace asln
