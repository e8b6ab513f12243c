#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "asln/errors.hpp"
#include "asln/numeric.hpp"
#include "asln/primes.hpp"
#include "asln/tables.hpp"

// Arithmetic of the fair Bernoulli walk S_n = e_1 + ... + e_n, e_i in {0, 1},
// so S_n ~ Binomial(n, 1/2).

namespace asln {

// -----------------------------------------------------------------------------
// Exact residue distributions
// -----------------------------------------------------------------------------

struct ModWalkDistribution {
  std::uint64_t n = 0;
  std::uint64_t d = 1;
  std::vector<double> probs;  // probs[r] = P{S_n = r mod d}
};

/// Residue DP: start at 0 with mass 1, each step sends half the mass from r to
/// r and half to r + 1 (mod d). Values are carried as unevaluated hi + lo pairs
/// so rounding does not accumulate over the n steps.
inline ModWalkDistribution binomial_mod_distribution(std::uint64_t n, std::uint64_t d) {
  if (d == 0) throw PreconditionError("binomial_mod_distribution: invalid modulus 0");
  require(n >= 1, "binomial_mod_distribution: n must be at least 1");
  std::vector<double> hi(d, 0.0), lo(d, 0.0), nhi(d), nlo(d);
  hi[0] = 1.0;
  for (std::uint64_t step = 0; step < n; ++step) {
    for (std::uint64_t r = 0; r < d; ++r) {
      const std::uint64_t from = r == 0 ? d - 1 : r - 1;
      double s, e;
      two_sum(0.5 * hi[r], 0.5 * hi[from], s, e);
      nhi[r] = s;
      nlo[r] = 0.5 * (lo[r] + lo[from]) + e;
    }
    std::swap(hi, nhi);
    std::swap(lo, nlo);
  }
  ModWalkDistribution out;
  out.n = n;
  out.d = d;
  out.probs.resize(d);
  for (std::uint64_t r = 0; r < d; ++r) out.probs[r] = hi[r] + lo[r];
  return out;
}

/// P{d | S_n}; the k = 0 atom is included since every d divides 0.
inline double prob_divides(std::uint64_t n, std::uint64_t d) {
  return binomial_mod_distribution(n, d).probs[0];
}

/// Binomial(n, 1/2) probability mass by repeated halving of Pascal rows.
inline std::vector<double> binomial_pmf(std::uint64_t n) {
  std::vector<double> row(n + 1, 0.0);
  row[0] = 1.0;
  for (std::uint64_t m = 1; m <= n; ++m) {
    for (std::uint64_t k = m; k >= 1; --k) row[k] = 0.5 * (row[k] + row[k - 1]);
    row[0] *= 0.5;
  }
  return row;
}

/// P{d | S_n} summed from a precomputed pmf.
inline double prob_divides_from_pmf(const std::vector<double>& pmf, std::uint64_t d) {
  Neumaier<double> acc;
  for (std::size_t k = 0; k < pmf.size(); k += d) acc += pmf[k];
  return acc.value();
}

// -----------------------------------------------------------------------------
// Theta approximation
// -----------------------------------------------------------------------------

struct ThetaValue {
  std::uint64_t d = 0, n = 0;
  cplx direct{};  // sum_l exp(i pi n l / d - n pi^2 l^2 / (2 d^2))
  double dual = 0;  // sqrt(2 / (pi n)) sum_l exp(-2 (n/(2d) + l)^2 d^2 / n)
  double truncation_bound = 0;  // bound on |omitted terms| of direct/d plus dual
};

inline constexpr double kDefaultThetaTailEps = 1e-16;

/// Lattice sum for Theta(d, n) and its Poisson-dual Gaussian sum, each
/// truncated so the omitted Gaussian tail is below tail_eps.
inline ThetaValue theta(std::uint64_t d, std::uint64_t n, double tail_eps = kDefaultThetaTailEps) {
  require(d >= 2 && d <= n, "theta: requires 2 <= d <= n");
  require(tail_eps > 0 && tail_eps < 1, "theta: tail_eps must lie in (0, 1)");
  constexpr double pi = std::numbers::pi;
  const double nd = static_cast<double>(n), dd = static_cast<double>(d);
  const double log_inv = std::log(1.0 / tail_eps);

  // Sum l = -L..L of exp(i pi n l / d) exp(-a l^2), a = n pi^2 / (2 d^2).
  const double a = nd * pi * pi / (2.0 * dd * dd);
  const auto L = static_cast<std::int64_t>(std::ceil(dd * std::sqrt(2.0 * log_inv / (pi * pi) / nd))) + 1;
  Neumaier<cplx> direct;
  const std::int64_t two_d = static_cast<std::int64_t>(2 * d);
  for (std::int64_t l = -L; l <= L; ++l) {
    // Reduce n l mod 2d exactly before forming the phase.
    std::int64_t k = static_cast<std::int64_t>((static_cast<__int128>(n) * l) % two_d);
    if (k < 0) k += two_d;
    const double phase = pi * static_cast<double>(k) / dd;
    direct += std::polar(std::exp(-a * static_cast<double>(l * l)), phase);
  }
  const double ld = static_cast<double>(L + 1);
  const double direct_tail = 2.0 * std::exp(-a * ld * ld) / (1.0 - std::exp(-a * (2.0 * ld + 1.0)));

  // Dual side: terms exp(-b (c + l)^2) with c = n / (2d), b = 2 d^2 / n.
  const double c = nd / (2.0 * dd);
  const double b = 2.0 * dd * dd / nd;
  const double R = std::sqrt(log_inv / b) + 1.0;
  const auto l_lo = static_cast<std::int64_t>(std::floor(-c - R));
  const auto l_hi = static_cast<std::int64_t>(std::ceil(-c + R));
  Neumaier<double> dual;
  for (std::int64_t l = l_lo; l <= l_hi; ++l) {
    const double x = c + static_cast<double>(l);
    dual += std::exp(-b * x * x);
  }
  const double pref = std::sqrt(2.0 / (pi * nd));
  const double dual_tail = pref * 2.0 * std::exp(-b * R * R) / (1.0 - std::exp(-2.0 * b * R));

  ThetaValue tv;
  tv.d = d;
  tv.n = n;
  tv.direct = direct.value();
  tv.dual = pref * dual.value();
  tv.truncation_bound = direct_tail / dd + dual_tail;
  return tv;
}

// -----------------------------------------------------------------------------
// Error regimes of the theta approximation
// -----------------------------------------------------------------------------

struct Lemma4Row {
  std::uint64_t n = 0, d = 0;
  double exact = 0;      // P{d | S_n}
  double theta = 0;      // dual Gaussian sum, i.e. Theta(d, n) / d
  double abs_error = 0;  // |exact - theta|
  double bound = 0;      // (log n)^{5/2} n^{-3/2}
  double ratio = 0;      // abs_error / bound
};

/// Sup of an error over a d-window together with its normaliser.
struct RegimeSup {
  std::uint64_t argmax_d = 0;
  double sup_error = 0;
  double fitted_constant = 0;  // sup over the window of error / scale(d)
};

struct Lemma4Summary {
  std::uint64_t n = 0;
  RegimeSup theta_uniform;  // sup_{2<=d<=n} |P - Theta/d| against (log n)^{5/2} n^{-3/2}
  RegimeSup small_d;        // d <= sqrt n: |P - 1/d| against scale + e^{-n pi^2/(2d^2)}/d
  RegimeSup large_d;        // sqrt n <= d <= n: |P - 1/d| against n^{-1/2}
  RegimeSup stretched;      // d < (pi/sqrt 2) n^{(1-rho)/2}: |P - 1/d| against e^{-(1-eps) n^rho}
  double rho = 0.5;
  double eps = 0.5;
};

struct Lemma4Report {
  std::vector<Lemma4Row> rows;  // every (n, d) with 2 <= d <= n, ordered by n then d
  std::vector<Lemma4Summary> summaries;
};

inline double lemma4_scale(std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return std::pow(std::log(nd), 2.5) * std::pow(nd, -1.5);
}

/// Exact divisibility probabilities against the theta approximation and 1/d.
/// Work is parallel over n; output order is fixed.
inline Lemma4Report lemma4_error_report(const std::vector<std::uint64_t>& n_grid, unsigned threads = 1,
                                        double rho = 0.5, double eps = 0.5) {
  require(!n_grid.empty(), "lemma4_error_report: empty grid");
  for (auto n : n_grid) require(n >= 2 && n <= 2048, "lemma4_error_report: need 2 <= n <= 2048");
  require(rho > 0 && rho < 1 && eps > 0 && eps < 1, "lemma4_error_report: rho, eps must lie in (0, 1)");
  constexpr double pi = std::numbers::pi;
  std::vector<std::vector<Lemma4Row>> rows(n_grid.size());
  std::vector<Lemma4Summary> sums(n_grid.size());

  parallel_for(n_grid.size(), threads, [&](std::size_t i) {
    const std::uint64_t n = n_grid[i];
    const double nd = static_cast<double>(n);
    const auto pmf = binomial_pmf(n);
    const double scale = lemma4_scale(n);
    const double sqrt_n = std::sqrt(nd);
    const double window = (pi / std::sqrt(2.0)) * std::pow(nd, (1.0 - rho) / 2.0);
    const double stretched_scale = std::exp(-(1.0 - eps) * std::pow(nd, rho));
    Lemma4Summary s;
    s.n = n;
    s.rho = rho;
    s.eps = eps;
    auto bump = [](RegimeSup& r, std::uint64_t d, double err, double normalised) {
      if (err > r.sup_error) {
        r.sup_error = err;
        r.argmax_d = d;
      }
      r.fitted_constant = std::max(r.fitted_constant, normalised);
    };
    for (std::uint64_t d = 2; d <= n; ++d) {
      const double dd = static_cast<double>(d);
      Lemma4Row row;
      row.n = n;
      row.d = d;
      row.exact = prob_divides_from_pmf(pmf, d);
      row.theta = theta(d, n).dual;
      row.abs_error = std::abs(row.exact - row.theta);
      row.bound = scale;
      row.ratio = row.abs_error / scale;
      rows[i].push_back(row);
      bump(s.theta_uniform, d, row.abs_error, row.ratio);

      const double dev = std::abs(row.exact - 1.0 / dd);
      if (dd <= sqrt_n) bump(s.small_d, d, dev, dev / (scale + std::exp(-nd * pi * pi / (2 * dd * dd)) / dd));
      if (dd >= sqrt_n) bump(s.large_d, d, dev, dev * sqrt_n);
      if (dd < window) bump(s.stretched, d, dev, dev / stretched_scale);
    }
    sums[i] = s;
  });

  Lemma4Report rep;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    rep.rows.insert(rep.rows.end(), rows[i].begin(), rows[i].end());
    rep.summaries.push_back(sums[i]);
  }
  return rep;
}

// -----------------------------------------------------------------------------
// Pair correlations and the second moment of f(S_n)
// -----------------------------------------------------------------------------

struct PairProb {
  double P_pq = 0, P_p = 0, P_q = 0;
  double covariance_defect = 0;  // |P_pq - P_p P_q|
};

inline PairProb pair_prob(std::uint64_t n, std::uint64_t p, std::uint64_t q) {
  require(is_prime_u64(p) && is_prime_u64(q), "pair_prob: p and q must be prime");
  require(p != q, "pair_prob: p and q must be distinct");
  if (p * q > n) throw PreconditionError("pair_prob: pq = " + std::to_string(p * q) + " exceeds n");
  PairProb r;
  r.P_pq = prob_divides(n, p * q);
  r.P_p = prob_divides(n, p);
  r.P_q = prob_divides(n, q);
  r.covariance_defect = std::abs(r.P_pq - r.P_p * r.P_q);
  return r;
}

struct SecondMomentParams {
  double h = 0.2;
  double C_eps = 2.0;
  /// C_h = ceil(1/h) when left at 0.
  double C_h = 0.0;
};

struct SecondMoment {
  std::uint64_t n = 0;
  double oracle_value = 0;        // sum_{k=1}^n C(n,k) 2^{-n} |f(k)|^2
  double pair_formula_value = 0;  // expansion over primes and prime pairs
  double lemma_bound = 0;
  bool holds = false;
  double h = 0, C_h = 0, C_eps = 0;
};

/// E|f(S_n)|^2 on {S_n >= 1} two ways, and the bound built from the prime
/// sums below and above n^h. The k = 0 atom is removed on both sides.
inline SecondMoment second_moment_f_Sn(const ArithmeticTables& t, const PrimeTable& primes, std::uint64_t n,
                                       SecondMomentParams params = {}) {
  require(n >= 1 && n <= 60, "second_moment_f_Sn: exact path needs 1 <= n <= 60");
  require(n <= t.N && n <= primes.N, "second_moment_f_Sn: n beyond table horizon");
  require(params.h > 0 && params.h < 0.25, "second_moment_f_Sn: h must lie in (0, 1/4)");
  SecondMoment r;
  r.n = n;
  r.h = params.h;
  r.C_h = params.C_h > 0 ? params.C_h : std::ceil(1.0 / params.h);
  r.C_eps = params.C_eps;

  const auto pmf = binomial_pmf(n);
  Neumaier<double> oracle;
  for (std::uint64_t k = 1; k <= n; ++k) oracle += pmf[k] * std::norm(t.f[k]);
  r.oracle_value = oracle.value();

  const double atom = std::ldexp(1.0, -static_cast<int>(n));
  std::vector<std::uint64_t> ps;
  for (auto p : primes.primes) {
    if (p > n) break;
    ps.push_back(p);
  }
  Neumaier<double> diag;
  Neumaier<cplx> cross;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    diag += std::norm(t.f[ps[i]]) * (prob_divides(n, ps[i]) - atom);
    for (std::size_t j = i + 1; j < ps.size() && ps[i] * ps[j] <= n; ++j)
      cross += t.f[ps[i]] * std::conj(t.f[ps[j]]) * (prob_divides(n, ps[i] * ps[j]) - atom);
  }
  r.pair_formula_value = diag.value() + 2.0 * cross.value().real();

  const std::uint64_t split = floor_power(n, params.h);
  double sup_large = 0;
  Neumaier<cplx> harmonic;
  Neumaier<double> square;
  for (auto p : ps) {
    if (p <= split) {
      harmonic += t.f[p] / static_cast<double>(p);
      square += std::norm(t.f[p]) / static_cast<double>(p);
    } else {
      sup_large = std::max(sup_large, std::abs(t.f[p]));
    }
  }
  const double root = r.C_h * sup_large + std::abs(harmonic.value()) + r.C_eps * std::sqrt(square.value());
  r.lemma_bound = root * root;
  r.holds = r.oracle_value <= r.lemma_bound;
  return r;
}

// -----------------------------------------------------------------------------
// Staying above a line
// -----------------------------------------------------------------------------

/// ceil(rho * n) guarded against rho having been rounded up from a rational.
inline std::uint64_t ceil_line(double rho, std::uint64_t n) {
  const double x = rho * static_cast<double>(n);
  return static_cast<std::uint64_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

struct EtaEstimate {
  double rho = 0;
  std::uint64_t N = 0;
  double stay_prob = 0;  // P{S_n >= rho n for all 1 <= n <= N}
  double threshold = 0.01;
  double lower_bound_eta = 0;  // rho if stay_prob > threshold, else 0
};

/// Mass still in the DP after each requested horizon. States are the current
/// walk heights; mass below the line is absorbed, and the upper edge is
/// trimmed once entries underflow to below 1e-300. Reported values are
/// clamped to be nonincreasing across horizons.
inline std::vector<double> eta_stay_profile(double rho, const std::vector<std::uint64_t>& horizons) {
  require(rho > 0 && rho < 1, "eta_stay_above_prob: rho must lie in (0, 1)");
  require(!horizons.empty(), "eta_stay_above_prob: no horizons");
  require(std::is_sorted(horizons.begin(), horizons.end()), "eta_stay_above_prob: horizons must be sorted");
  const std::uint64_t N = horizons.back();
  require(horizons.front() >= 1 && N <= 100000, "eta_stay_above_prob: need 1 <= N <= 1e5");
  constexpr double kNegligible = 1e-300;

  std::vector<double> mass(N + 2, 0.0);
  mass[0] = 1.0;
  std::uint64_t lo = 0, hi = 0;  // live index range of heights
  std::vector<double> out;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    for (std::uint64_t s = hi + 1; s > lo; --s) mass[s] = 0.5 * (mass[s] + mass[s - 1]);
    mass[lo] *= 0.5;
    ++hi;
    const std::uint64_t line = ceil_line(rho, n);
    while (lo < line && lo <= hi) mass[lo++] = 0.0;
    while (hi > lo && mass[hi] < kNegligible) mass[hi--] = 0.0;
    if (lo > hi) {  // everything absorbed
      lo = hi = line;
      mass[lo] = 0.0;
    }
    while (next < horizons.size() && horizons[next] == n) {
      Neumaier<double> acc;
      for (std::uint64_t s = lo; s <= hi; ++s) acc += mass[s];
      out.push_back(out.empty() ? acc.value() : std::min(acc.value(), out.back()));
      ++next;
    }
  }
  return out;
}

inline EtaEstimate eta_stay_above_prob(double rho, std::uint64_t N, double threshold = 0.01) {
  EtaEstimate e;
  e.rho = rho;
  e.N = N;
  e.threshold = threshold;
  e.stay_prob = eta_stay_profile(rho, {N}).front();
  e.lower_bound_eta = e.stay_prob > threshold ? rho : 0.0;
  return e;
}

inline std::vector<double> default_eta_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(0.05 * i);
  return g;
}

struct EtaGridReport {
  std::uint64_t N = 0;
  double threshold = 0.01;
  std::vector<EtaEstimate> rows;
  double lower_bound_eta = 0;  // largest grid rho with stay_prob > threshold
};

inline EtaGridReport eta_grid_estimate(std::uint64_t N, const std::vector<double>& grid = default_eta_grid(),
                                       double threshold = 0.01, unsigned threads = 1) {
  require(!grid.empty(), "eta_grid_estimate: empty grid");
  EtaGridReport rep;
  rep.N = N;
  rep.threshold = threshold;
  rep.rows.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { rep.rows[i] = eta_stay_above_prob(grid[i], N, threshold); });
  for (const auto& r : rep.rows) rep.lower_bound_eta = std::max(rep.lower_bound_eta, r.lower_bound_eta);
  return rep;
}

}  // namespace asln
