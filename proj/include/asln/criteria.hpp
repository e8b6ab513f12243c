#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "asln/distribution.hpp"
#include "asln/errors.hpp"
#include "asln/numeric.hpp"
#include "asln/primes.hpp"
#include "asln/tables.hpp"
#include "asln/weights.hpp"

// Finite-horizon checkers for the sufficient conditions of the weighted SLLN.
// Every checker returns the raw profile so the verdict can be audited; the
// verdicts are heuristics on a finite grid, never proofs.

namespace asln {

enum class ConditionId { cond_1_7, lindeberg, cond_1_8, cond_1_9, cond_1_10, cond_1_12, cond_1_13, maincond, jop_limsup };
enum class Verdict { holds, fails, inconclusive };

/// Shape a profile must have for its condition to hold.
enum class Trend { bounded_above, bounded_below, to_zero };

inline std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::cond_1_7: return "cond_1_7";
    case ConditionId::lindeberg: return "lindeberg";
    case ConditionId::cond_1_8: return "cond_1_8";
    case ConditionId::cond_1_9: return "cond_1_9";
    case ConditionId::cond_1_10: return "cond_1_10";
    case ConditionId::cond_1_12: return "cond_1_12";
    case ConditionId::cond_1_13: return "cond_1_13";
    case ConditionId::maincond: return "maincond";
    case ConditionId::jop_limsup: return "jop_limsup";
  }
  return "?";
}

inline ConditionId parse_condition_id(std::string_view s) {
  for (auto id : {ConditionId::cond_1_7, ConditionId::lindeberg, ConditionId::cond_1_8, ConditionId::cond_1_9,
                  ConditionId::cond_1_10, ConditionId::cond_1_12, ConditionId::cond_1_13, ConditionId::maincond,
                  ConditionId::jop_limsup})
    if (to_string(id) == s) return id;
  throw PreconditionError("unknown condition '" + std::string(s) + "'");
}

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

inline std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::bounded_above: return "bounded_above";
    case Trend::bounded_below: return "bounded_below";
    case Trend::to_zero: return "to_zero";
  }
  return "?";
}

struct GridPoint {
  std::uint64_t n = 0;  // n, or t for tail and counting profiles
  double lhs = 0, rhs = 0, ratio = 0;
};

struct Profile {
  std::string name;
  Trend trend = Trend::bounded_above;
  std::vector<GridPoint> grid;
  Verdict verdict = Verdict::inconclusive;
  double fitted_constant = 0;
};

struct ConditionReport {
  ConditionId id = ConditionId::cond_1_7;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<GridPoint> grid;  // the headline profile
  Verdict verdict = Verdict::inconclusive;
  double fitted_constant = 0;
  std::vector<Profile> profiles;  // all profiles entering the verdict, headline first
  std::vector<std::string> diagnostics;
};

// -----------------------------------------------------------------------------
// Verdict rule
// -----------------------------------------------------------------------------

struct Judgement {
  Verdict verdict = Verdict::inconclusive;
  double fitted_constant = 0;
  std::string note;
};

/// Decade-window rule on a grid spanning at least three decades. With M the
/// maximum (m the minimum) of the ratio over the last decade (n_max/10, n_max]
/// and the decade before it:
///   bounded_above  holds if M_last <= 1.1 M_mid, fails if M_last >= 2 M_mid
///   bounded_below  holds if m_last >= m_mid / 1.1, fails if m_last <= m_mid / 2
///   to_zero        holds if M_last == 0 or M_last <= M_mid / 2,
///                  fails if M_last >= 2 M_mid
/// and inconclusive otherwise. A pure function of the grid.
inline Judgement judge(const std::vector<GridPoint>& grid, Trend trend) {
  Judgement j;
  if (grid.empty()) {
    j.note = "empty grid";
    return j;
  }
  double sup = -std::numeric_limits<double>::infinity(), inf = std::numeric_limits<double>::infinity();
  for (const auto& g : grid) {
    sup = std::max(sup, g.ratio);
    inf = std::min(inf, g.ratio);
  }
  const double n_max = static_cast<double>(grid.back().n);
  double M_last = -1, M_mid = -1, m_last = std::numeric_limits<double>::infinity(), m_mid = m_last;
  bool have_last = false, have_mid = false;
  for (const auto& g : grid) {
    const double n = static_cast<double>(g.n);
    if (n > n_max / 10) {
      have_last = true;
      M_last = std::max(M_last, g.ratio);
      m_last = std::min(m_last, g.ratio);
    } else if (n > n_max / 100) {
      have_mid = true;
      M_mid = std::max(M_mid, g.ratio);
      m_mid = std::min(m_mid, g.ratio);
    }
  }
  switch (trend) {
    case Trend::bounded_above: j.fitted_constant = sup; break;
    case Trend::bounded_below: j.fitted_constant = inf; break;
    case Trend::to_zero: j.fitted_constant = have_last ? M_last : sup; break;
  }
  if (static_cast<double>(grid.front().n) > n_max / 1000) {
    j.note = "grid spans fewer than three decades";
    return j;
  }
  if (!have_last || !have_mid) {
    j.note = "a decade window is empty";
    return j;
  }
  switch (trend) {
    case Trend::bounded_above:
      if (M_last <= 1.1 * M_mid) j.verdict = Verdict::holds;
      else if (M_last >= 2.0 * M_mid) j.verdict = Verdict::fails;
      break;
    case Trend::bounded_below:
      if (m_last >= m_mid / 1.1 && m_last > 0) j.verdict = Verdict::holds;
      else if (m_last <= m_mid / 2.0) j.verdict = Verdict::fails;
      break;
    case Trend::to_zero:
      if (M_last == 0 || M_last <= M_mid / 2.0) j.verdict = Verdict::holds;
      else if (M_last >= 2.0 * M_mid) j.verdict = Verdict::fails;
      break;
  }
  return j;
}

/// holds iff every part holds; fails if any part fails.
inline Verdict combine(const std::vector<Verdict>& parts) {
  bool all_hold = true;
  for (auto v : parts) {
    if (v == Verdict::fails) return Verdict::fails;
    if (v != Verdict::holds) all_hold = false;
  }
  return all_hold ? Verdict::holds : Verdict::inconclusive;
}

namespace detail {

inline Profile make_profile(std::string name, Trend trend, std::vector<GridPoint> grid) {
  Profile p;
  p.name = std::move(name);
  p.trend = trend;
  p.grid = std::move(grid);
  const auto j = judge(p.grid, trend);
  p.verdict = j.verdict;
  p.fitted_constant = j.fitted_constant;
  return p;
}

inline GridPoint point(std::uint64_t n, double lhs, double rhs) {
  return {n, lhs, rhs, rhs != 0 ? lhs / rhs : std::numeric_limits<double>::infinity()};
}

inline std::vector<std::uint64_t> sorted_grid(std::vector<std::uint64_t> g, std::uint64_t N, const char* who) {
  require(!g.empty(), std::string(who) + ": empty grid");
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  require(g.back() <= N, std::string(who) + ": grid exceeds horizon");
  return g;
}

/// Headline grid and verdict from the profiles; headline is profiles[0].
inline void finish(ConditionReport& r, std::vector<Profile> profiles) {
  std::vector<Verdict> vs;
  for (const auto& p : profiles) {
    vs.push_back(p.verdict);
    const auto j = judge(p.grid, p.trend);
    if (!j.note.empty()) r.diagnostics.push_back(p.name + ": " + j.note);
  }
  r.grid = profiles.front().grid;
  r.fitted_constant = profiles.front().fitted_constant;
  r.verdict = combine(vs);
  r.profiles = std::move(profiles);
}

inline void require_nonneg(const ArithmeticTables& t, const char* who) {
  if (!t.nonnegative) throw PreconditionError(std::string(who) + ": requires a real nonnegative function");
}

}  // namespace detail

inline std::vector<double> default_lindeberg_eps() { return {0.01, 0.05, 0.1, 0.5, 1.0}; }

// -----------------------------------------------------------------------------
// Lindeberg
// -----------------------------------------------------------------------------

/// lhs(n, eps) = sum_{p < n, |f(p)| >= eps B_n^{1/2}} |f(p)|^2 / p, rhs = B_n,
/// ratio = lhs / rhs. One to_zero profile per eps.
inline ConditionReport lindeberg_profile(const ArithmeticTables& t, const PrimeTable& primes,
                                         const std::vector<double>& eps_list, std::vector<std::uint64_t> n_grid) {
  n_grid = detail::sorted_grid(std::move(n_grid), std::min(t.N, primes.N), "lindeberg_profile");
  require(!eps_list.empty(), "lindeberg_profile: empty eps list");
  for (double e : eps_list) require(e > 0, "lindeberg_profile: eps must be positive");
  for (auto n : n_grid)
    if (!(t.B[n] > 0)) throw DegenerateError("lindeberg_profile: B_n = 0 at n=" + std::to_string(n));

  ConditionReport r;
  r.id = ConditionId::lindeberg;
  r.params["eps"] = eps_list;
  std::vector<Profile> profiles;
  for (double eps : eps_list) {
    std::vector<GridPoint> grid;
    for (auto n : n_grid) {
      const double tau = eps * std::sqrt(t.B[n]);
      Neumaier<double> acc;
      for (auto p : primes.primes) {
        if (p >= n) break;
        if (std::abs(t.f[p]) >= tau) acc += std::norm(t.f[p]) / static_cast<double>(p);
      }
      grid.push_back(detail::point(n, acc.value(), t.B[n]));
    }
    profiles.push_back(detail::make_profile("eps=" + nlohmann::json(eps).dump(), Trend::to_zero, std::move(grid)));
  }
  detail::finish(r, std::move(profiles));
  return r;
}

// -----------------------------------------------------------------------------
// f(p) = o(B_p^{1/2}) with B_p divergent
// -----------------------------------------------------------------------------

/// At each grid point the largest prime p <= n gives (p, f(p), B_p^{1/2}).
/// Because B_p may grow only like log log p, the decay of the ratio is judged
/// against B itself: holds if B keeps growing (>= 1% over the last two
/// decades) and log ratio falls at least like B^{-1/4}; fails if B stalls or
/// the elasticity is above -0.1.
inline ConditionReport cond_1_7(const ArithmeticTables& t, const PrimeTable& primes, std::vector<std::uint64_t> n_grid) {
  detail::require_nonneg(t, "cond_1_7");
  n_grid = detail::sorted_grid(std::move(n_grid), std::min(t.N, primes.N), "cond_1_7");
  ConditionReport r;
  r.id = ConditionId::cond_1_7;
  std::vector<GridPoint> ratio_grid, b_grid;
  for (auto n : n_grid) {
    if (n < 2) continue;
    const std::size_t k = primes.pi(n);
    const std::uint64_t p = primes.primes[k - 1];
    const double B = t.B[p];
    ratio_grid.push_back(detail::point(p, t.f[p].real(), std::sqrt(B)));
    b_grid.push_back({p, B, 1.0, B});
  }
  require(!ratio_grid.empty(), "cond_1_7: grid has no point >= 2");

  Profile main;
  main.name = "f(p)/sqrt(B_p)";
  main.trend = Trend::to_zero;
  main.grid = ratio_grid;
  Profile bp = detail::make_profile("B_p", Trend::bounded_below, b_grid);

  const double p_max = static_cast<double>(ratio_grid.back().n);
  double B_last = b_grid.back().lhs, B_mid = 0;
  for (const auto& g : b_grid)
    if (static_cast<double>(g.n) <= p_max / 100) B_mid = g.lhs;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ratio_grid.size(); ++i) {
    if (static_cast<double>(ratio_grid[i].n) <= p_max / 1000) continue;
    if (ratio_grid[i].ratio > 0 && b_grid[i].lhs > 0) {
      lx.push_back(std::log(b_grid[i].lhs));
      ly.push_back(std::log(ratio_grid[i].ratio));
    }
  }
  const bool b_grows = B_mid > 0 ? (B_last - B_mid) >= 0.01 * B_last : B_last > 0;
  double elasticity = std::numeric_limits<double>::quiet_NaN();
  bool fit_ok = false;
  if (lx.size() >= 2) {
    double lo = *std::min_element(lx.begin(), lx.end()), hi = *std::max_element(lx.begin(), lx.end());
    if (hi - lo > 1e-12) {
      elasticity = ols_slope(lx, ly);
      fit_ok = true;
    }
  }
  main.fitted_constant = 0;
  for (const auto& g : ratio_grid)
    if (static_cast<double>(g.n) > p_max / 10) main.fitted_constant = std::max(main.fitted_constant, g.ratio);
  if (!b_grows) {
    main.verdict = Verdict::fails;
    r.diagnostics.push_back("B_p does not grow over the last two decades");
  } else if (!fit_ok) {
    main.verdict = ratio_grid.back().ratio == 0 ? Verdict::holds : Verdict::inconclusive;
  } else if (elasticity <= -0.25) {
    main.verdict = Verdict::holds;
  } else if (elasticity >= -0.1) {
    main.verdict = Verdict::fails;
  } else {
    main.verdict = Verdict::inconclusive;
  }
  r.params["elasticity_vs_B"] = fit_ok ? nlohmann::json(elasticity) : nlohmann::json(nullptr);
  r.params["B_growth_last_two_decades"] = B_last > 0 ? (B_last - B_mid) / B_last : 0.0;
  r.grid = main.grid;
  r.fitted_constant = main.fitted_constant;
  r.verdict = main.verdict;
  r.profiles = {main, bp};
  return r;
}

// -----------------------------------------------------------------------------
// Tail sum sum_{p > t} f(p) / (p^2 A_p) = O(1/t)
// -----------------------------------------------------------------------------

inline ConditionReport cond_1_8_tail(const ArithmeticTables& t, const PrimeTable& primes,
                                     std::vector<std::uint64_t> t_grid) {
  detail::require_nonneg(t, "cond_1_8_tail");
  const std::uint64_t N = std::min(t.N, primes.N);
  t_grid = detail::sorted_grid(std::move(t_grid), N, "cond_1_8_tail");
  // Suffix sums over primes, accumulated from the top down.
  const std::size_t np = primes.pi(N);
  std::vector<double> suffix(np + 1, 0.0);
  Neumaier<double> acc;
  for (std::size_t i = np; i-- > 0;) {
    const std::uint64_t p = primes.primes[i];
    const double fp = t.f[p].real();
    if (fp != 0) {
      const double A = t.A(p);
      if (!(A > 0)) throw DegenerateError("cond_1_8_tail: A_p = 0 at p=" + std::to_string(p));
      acc += fp / (static_cast<double>(p) * static_cast<double>(p) * A);
    }
    suffix[i] = acc.value();
  }
  std::vector<GridPoint> grid;
  for (auto tt : t_grid) {
    const double lhs = suffix[primes.pi(tt)];  // primes strictly above t
    grid.push_back({tt, lhs, 1.0 / static_cast<double>(tt), lhs * static_cast<double>(tt)});
  }
  ConditionReport r;
  r.id = ConditionId::cond_1_8;
  r.params["horizon"] = N;
  detail::finish(r, {detail::make_profile("t*tail(t)", Trend::bounded_above, std::move(grid))});
  return r;
}

// -----------------------------------------------------------------------------
// B_n^{1/2} = O(A_n) with A_{2n} of the order of A_n
// -----------------------------------------------------------------------------

inline ConditionReport cond_1_9(const ArithmeticTables& t, std::vector<std::uint64_t> n_grid) {
  detail::require_nonneg(t, "cond_1_9");
  n_grid = detail::sorted_grid(std::move(n_grid), t.N, "cond_1_9");
  std::vector<GridPoint> main, doubling;
  for (auto n : n_grid) {
    const double A = t.A(n);
    if (!(A > 0)) throw DegenerateError("cond_1_9: A_n = 0 at n=" + std::to_string(n));
    main.push_back(detail::point(n, std::sqrt(t.B[n]), A));
    if (2 * n <= t.N) doubling.push_back(detail::point(n, t.A(2 * n), A));
  }
  ConditionReport r;
  r.id = ConditionId::cond_1_9;
  std::vector<Profile> ps{detail::make_profile("sqrt(B_n)/A_n", Trend::bounded_above, main)};
  if (!doubling.empty()) ps.push_back(detail::make_profile("A_2n/A_n", Trend::bounded_above, doubling));
  detail::finish(r, std::move(ps));
  return r;
}

// -----------------------------------------------------------------------------
// F(n) >= C_1 n max(A_n, B_n^{1/2})
// -----------------------------------------------------------------------------

/// The verdict uses only the main ratio; the two implied bounds are reported
/// alongside as separate profiles.
inline ConditionReport cond_1_10(const ArithmeticTables& t, std::vector<std::uint64_t> n_grid) {
  detail::require_nonneg(t, "cond_1_10");
  n_grid = detail::sorted_grid(std::move(n_grid), t.N, "cond_1_10");
  std::vector<GridPoint> main, root_b, g_bound;
  for (auto n : n_grid) {
    const double nd = static_cast<double>(n), A = t.A(n), sB = std::sqrt(t.B[n]);
    main.push_back(detail::point(n, t.F[n].real(), nd * std::max(A, sB)));
    if (A > 0) {
      root_b.push_back(detail::point(n, sB, A));
      g_bound.push_back(detail::point(n, t.G[n], nd * A * A));
    }
  }
  ConditionReport r;
  r.id = ConditionId::cond_1_10;
  Profile head = detail::make_profile("F/(n max(A,sqrt B))", Trend::bounded_below, main);
  std::vector<Profile> ps{head};
  if (!root_b.empty()) {
    ps.push_back(detail::make_profile("sqrt(B)/A", Trend::bounded_above, root_b));
    ps.push_back(detail::make_profile("G/(n A^2)", Trend::bounded_above, g_bound));
  }
  r.grid = head.grid;
  r.fitted_constant = head.fitted_constant;
  r.verdict = head.verdict;
  r.params["C1"] = head.fitted_constant;
  if (ps.size() > 1) r.params["C2"] = ps[2].fitted_constant;
  const auto j = judge(head.grid, head.trend);
  if (!j.note.empty()) r.diagnostics.push_back(j.note);
  r.profiles = std::move(ps);
  return r;
}

// -----------------------------------------------------------------------------
// Abel-summation tail for general nonnegative weights
// -----------------------------------------------------------------------------

/// lhs(t) = sum_{t < n < N} G(n) |F(n+1) - F(n)| / (F(n)^2 F(n+1)), ratio t lhs(t).
inline ConditionReport cond_1_12_tail(const WeightSequence& w, std::vector<std::uint64_t> t_grid) {
  if (!w.nonnegative()) throw PreconditionError("cond_1_12_tail: requires nonnegative real weights");
  const std::uint64_t N = w.N();
  require(N >= 2, "cond_1_12_tail: horizon too short");
  t_grid = detail::sorted_grid(std::move(t_grid), N, "cond_1_12_tail");
  const std::uint64_t t_min = t_grid.front();
  std::vector<double> suffix(N + 1, 0.0);  // suffix[m] = sum over m <= n < N
  Neumaier<double> acc;
  for (std::uint64_t n = N - 1; n >= std::max<std::uint64_t>(t_min + 1, 1); --n) {
    const double F = w.W(n).real(), F1 = w.W(n + 1).real();
    if (F == 0 || F1 == 0) throw DegenerateError("cond_1_12_tail: F(n) = 0 at n=" + std::to_string(F == 0 ? n : n + 1));
    acc += w.G(n) * std::abs(F1 - F) / (F * F * F1);
    suffix[n] = acc.value();
    if (n == 1) break;
  }
  std::vector<GridPoint> grid;
  for (auto tt : t_grid) {
    const double lhs = tt + 1 <= N ? suffix[tt + 1] : 0.0;
    grid.push_back({tt, lhs, 1.0 / static_cast<double>(tt), lhs * static_cast<double>(tt)});
  }
  ConditionReport r;
  r.id = ConditionId::cond_1_12;
  r.params["weights"] = w.name();
  r.params["horizon"] = N;
  detail::finish(r, {detail::make_profile("t*tail(t)", Trend::bounded_above, std::move(grid))});
  return r;
}

// -----------------------------------------------------------------------------
// Comparison function H
// -----------------------------------------------------------------------------

struct NamedH {
  std::string name;
  std::function<double(std::uint64_t)> eval;
};

/// Named nondecreasing comparison functions: one, log, loglog, sqrt, and A
/// (the harmonic prime sum A_n of the given tables).
inline NamedH make_H(const std::string& name, const ArithmeticTables* tables = nullptr) {
  if (name == "one") return {name, [](std::uint64_t) { return 1.0; }};
  if (name == "log") return {name, [](std::uint64_t n) { return std::log(static_cast<double>(n)); }};
  if (name == "loglog")
    return {name, [](std::uint64_t n) { return std::log(std::log(static_cast<double>(n))); }};
  if (name == "sqrt") return {name, [](std::uint64_t n) { return std::sqrt(static_cast<double>(n)); }};
  if (name == "A") {
    require(tables != nullptr, "H=A needs arithmetic tables");
    return {name, [tables](std::uint64_t n) { return tables->A(n); }};
  }
  throw PreconditionError("unknown H '" + name + "'");
}

/// F(n) >= C_1 n H(n), G(n) <= C_2 n H(n)^2, |F(n+1) - F(n)| <= C_3 H(n).
/// The increment profile takes the max over each window between grid points.
inline ConditionReport cond_1_13(const WeightSequence& w, const NamedH& H, std::vector<std::uint64_t> n_grid) {
  if (!w.nonnegative()) throw PreconditionError("cond_1_13: requires nonnegative real weights");
  n_grid = detail::sorted_grid(std::move(n_grid), w.N() - 1, "cond_1_13");
  std::vector<GridPoint> r1, r2, r3;
  std::uint64_t prev = 0;
  for (auto n : n_grid) {
    const double h = H.eval(n);
    if (!(h > 0)) throw PreconditionError("cond_1_13: H(" + std::to_string(n) + ") is not positive");
    const double nd = static_cast<double>(n);
    r1.push_back(detail::point(n, w.W(n).real(), nd * h));
    r2.push_back(detail::point(n, w.G(n), nd * h * h));
    GridPoint worst{n, 0, h, 0};
    for (std::uint64_t m = std::max<std::uint64_t>(prev + 1, 1); m <= n; ++m) {
      const double hm = H.eval(m);
      if (!(hm > 0)) continue;
      const double inc = std::abs(w.W(m + 1) - w.W(m));
      if (inc / hm > worst.ratio) worst = {n, inc, hm, inc / hm};
    }
    r3.push_back(worst);
    prev = n;
  }
  ConditionReport r;
  r.id = ConditionId::cond_1_13;
  r.params["H"] = H.name;
  r.params["weights"] = w.name();
  detail::finish(r, {detail::make_profile("F/(nH)", Trend::bounded_below, r1),
                     detail::make_profile("G/(nH^2)", Trend::bounded_above, r2),
                     detail::make_profile("|F(n+1)-F(n)|/H", Trend::bounded_above, r3)});
  return r;
}

// -----------------------------------------------------------------------------
// Condition for complex additive f
// -----------------------------------------------------------------------------

/// With m = floor(eta n) and D(n) = |F(m)| / n, the ratios
///   r1 = sup_{n^h < p <= n} |f(p)| / D,  r2 = A_{n^h} / D,  r3 = B_{n^h}^{1/2} / D
/// must stay bounded; A is the modulus of the complex prime sum. The envelope
/// profile checks |F(n)| against its running maximum (bounded below).
inline ConditionReport maincond_profile(const ArithmeticTables& t, const PrimeTable& primes, double h, double eta,
                                        std::vector<std::uint64_t> n_grid) {
  if (!(h > 0 && h < 0.25)) throw PreconditionError("maincond_profile: h must lie in (0, 1/4)");
  if (!(eta > 0 && eta <= 0.5)) throw PreconditionError("maincond_profile: eta must lie in (0, 1/2]");
  n_grid = detail::sorted_grid(std::move(n_grid), std::min(t.N, primes.N), "maincond_profile");
  std::vector<GridPoint> head, r1, r2, r3, env;
  double running_max = 0;
  std::uint64_t scanned = 0;
  for (auto n : n_grid) {
    const auto m = static_cast<std::uint64_t>(std::floor(eta * static_cast<double>(n)));
    const double Fm = m >= 1 ? std::abs(t.F[m]) : 0.0;
    if (Fm == 0) throw DegenerateError("maincond_profile: F(floor(eta n)) = 0 at n=" + std::to_string(n));
    const double D = Fm / static_cast<double>(n);
    const std::uint64_t split = floor_power(n, h);
    double sup = 0;
    for (std::size_t k = primes.pi(split); k < primes.primes.size() && primes.primes[k] <= n; ++k)
      sup = std::max(sup, std::abs(t.f[primes.primes[k]]));
    const double A = t.A(split), sB = std::sqrt(t.B[split]);
    r1.push_back(detail::point(n, sup, D));
    r2.push_back(detail::point(n, A, D));
    r3.push_back(detail::point(n, sB, D));
    head.push_back(detail::point(n, std::max({sup, A, sB}), D));

    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = scanned + 1; k <= n; ++k) {
      const double a = std::abs(t.F[k]);
      running_max = std::max(running_max, a);
      if (running_max > 0) worst = std::min(worst, a / running_max);
    }
    scanned = n;
    if (std::isfinite(worst)) env.push_back({n, std::abs(t.F[n]), running_max, worst});
  }
  ConditionReport r;
  r.id = ConditionId::maincond;
  r.params["h"] = h;
  r.params["eta"] = eta;
  std::vector<Profile> ps{detail::make_profile("max/D", Trend::bounded_above, head),
                          detail::make_profile("sup|f(p)|/D", Trend::bounded_above, r1),
                          detail::make_profile("A_{n^h}/D", Trend::bounded_above, r2),
                          detail::make_profile("sqrt(B_{n^h})/D", Trend::bounded_above, r3)};
  if (!env.empty()) ps.push_back(detail::make_profile("|F|/envelope", Trend::bounded_below, env));
  detail::finish(r, std::move(ps));
  return r;
}

// -----------------------------------------------------------------------------
// Counting functions
// -----------------------------------------------------------------------------

/// N(x) = #{k : w_k != 0, |W_k / w_k| <= x} for x >= 1 and 0 for x < 1.
/// Indices with w_k = 0 are skipped (the ratio is undefined there).
class JopCounter {
 public:
  explicit JopCounter(const WeightSequence& w) {
    ratios_.reserve(w.N());
    for (std::uint64_t k = 1; k <= w.N(); ++k) {
      const double a = std::abs(w.w(k));
      if (a == 0) continue;
      ratios_.push_back(std::abs(w.W(k)) / a);
    }
    std::sort(ratios_.begin(), ratios_.end());
  }

  std::uint64_t count(double x) const {
    if (x < 1) return 0;
    return static_cast<std::uint64_t>(std::upper_bound(ratios_.begin(), ratios_.end(), x) - ratios_.begin());
  }

  const std::vector<double>& sorted_ratios() const { return ratios_; }

 private:
  std::vector<double> ratios_;
};

inline std::uint64_t jop_count_N(const WeightSequence& w, double x) {
  require(x >= 0, "jop_count_N: x must be nonnegative");
  return JopCounter(w).count(x);
}

/// Horizon check of |W_n| eventually nonzero and nondecreasing: returns the
/// index after which it holds (N + 1 if it never settles).
inline std::uint64_t monotone_modulus_from(const WeightSequence& w) {
  std::uint64_t n0 = 1;
  for (std::uint64_t n = 1; n <= w.N(); ++n) {
    const double a = std::abs(w.W(n));
    if (a == 0 || (n > 1 && a < std::abs(w.W(n - 1)))) n0 = n + 1;
  }
  return n0;
}

/// Profile of N(t)/t. If |W_n| has not settled into nondecreasing growth by
/// N/100 the report is inconclusive with a diagnostic.
inline ConditionReport jop_limsup_check(const WeightSequence& w, std::vector<std::uint64_t> t_grid) {
  t_grid = detail::sorted_grid(std::move(t_grid), std::numeric_limits<std::uint64_t>::max(), "jop_limsup_check");
  ConditionReport r;
  r.id = ConditionId::jop_limsup;
  r.params["weights"] = w.name();
  const std::uint64_t n0 = monotone_modulus_from(w);
  r.params["monotone_from"] = n0;
  const JopCounter counter(w);
  std::vector<GridPoint> grid;
  for (auto tt : t_grid) {
    const double td = static_cast<double>(tt);
    grid.push_back(detail::point(tt, static_cast<double>(counter.count(td)), td));
  }
  detail::finish(r, {detail::make_profile("N(t)/t", Trend::bounded_above, std::move(grid))});
  const bool settled = n0 <= w.N() / 100 && std::abs(w.W(w.N())) > std::abs(w.W(std::max<std::uint64_t>(n0, 1)));
  if (!settled) {
    r.verdict = Verdict::inconclusive;
    r.diagnostics.push_back("|W_n| is not eventually nonzero and increasing on the horizon (last violation at n=" +
                            std::to_string(n0 - 1) + ")");
  }
  return r;
}

/// L(t) = #{1 <= n <= N : |F(n)| <= t |f(n)|}; n with f(n) = F(n) = 0 counts.
inline std::uint64_t L_count(const ArithmeticTables& t, double threshold) {
  require(threshold >= 0, "L_count: t must be nonnegative");
  std::uint64_t c = 0;
  for (std::uint64_t n = 1; n <= t.N; ++n)
    if (std::abs(t.F[n]) <= threshold * std::abs(t.f[n])) ++c;
  return c;
}

struct CountProfile {
  std::vector<GridPoint> grid;  // (t, L(t), t, L(t)/t)
  double sup_ratio = 0;
};

inline CountProfile L_profile(const ArithmeticTables& t, const std::vector<std::uint64_t>& t_grid) {
  CountProfile cp;
  for (auto tt : t_grid) {
    require(tt >= 1, "L_profile: t must be positive");
    const double td = static_cast<double>(tt);
    cp.grid.push_back(detail::point(tt, static_cast<double>(L_count(t, td)), td));
    cp.sup_ratio = std::max(cp.sup_ratio, cp.grid.back().ratio);
  }
  return cp;
}

// -----------------------------------------------------------------------------
// E[ X^2 int_{y >= |X|} N(y) / y^3 dy ]
// -----------------------------------------------------------------------------

struct IntegralResult {
  double value = 0;
  double horizon_part = 0;  // contribution of N's jumps below Y
  double tail_part = 0;     // linear extrapolation N(y) ~ s y beyond Y
  double Y = 0;             // extrapolation point
  double slope = 0;         // s = N(Y) / Y
  bool diverges_at_horizon = false;
  std::string note;
};

namespace detail {

/// Shared set-up: each k contributes to N(y) from y >= r'_k = max(r_k, 1).
/// Y is the smallest r' over the top half of the horizon, so indices beyond
/// the horizon are assumed to have ratios >= Y.
struct IntegralSetup {
  std::vector<double> jumps;  // r'_k <= Y, ascending
  double Y = 0, s = 0;
  bool diverges = false;
  std::string note;
};

inline IntegralSetup integral_setup(const WeightSequence& w) {
  const std::uint64_t N = w.N();
  require(N >= 4, "integral_criterion: horizon too short");
  IntegralSetup st;
  st.Y = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = N / 2 + 1; k <= N; ++k) {
    const double a = std::abs(w.w(k));
    if (a == 0) continue;
    st.Y = std::min(st.Y, std::max(1.0, std::abs(w.W(k)) / a));
  }
  if (!std::isfinite(st.Y)) throw DegenerateError("integral_criterion: no nonzero weights in the upper half");
  JopCounter counter(w);
  for (double r : counter.sorted_ratios()) {
    const double rp = std::max(r, 1.0);
    if (rp <= st.Y) st.jumps.push_back(rp);
  }
  st.s = static_cast<double>(st.jumps.size()) / st.Y;
  // Extrapolation is only sound if N(t)/t looks bounded up to Y.
  std::vector<std::uint64_t> grid = dyadic_up_to(static_cast<std::uint64_t>(st.Y), 0);
  std::vector<GridPoint> prof;
  for (auto tt : grid) {
    const double td = static_cast<double>(tt);
    prof.push_back(point(tt, static_cast<double>(counter.count(td)), td));
  }
  const auto j = judge(prof, Trend::bounded_above);
  if (j.verdict == Verdict::fails) {
    st.diverges = true;
    st.note = "N(t)/t grows at the horizon; tail extrapolation refused";
  } else if (j.verdict == Verdict::inconclusive) {
    st.note = "N(t)/t boundedness inconclusive at the horizon: " + j.note;
  }
  return st;
}

}  // namespace detail

/// Inner integral I(a) = int_{max(a,1)}^inf N(y) / y^3 dy, exact over the jumps
/// of N below Y plus the extrapolated linear tail.
inline double integral_inner(const detail::IntegralSetup& st, double a) {
  Neumaier<double> acc;
  const double aY = std::max(a, st.Y);
  for (double r : st.jumps) {
    const double m = std::max(a, r);
    acc += 0.5 / (m * m) - 0.5 / (aY * aY);
  }
  return acc.value() + st.s / aY;
}

/// Model-based evaluation using closed-form truncated moments of |X|.
inline IntegralResult integral_criterion(const WeightSequence& w, const DistributionSpec& model) {
  const AbsMoments mom(model);
  const auto st = detail::integral_setup(w);
  IntegralResult res;
  res.Y = st.Y;
  res.slope = st.s;
  res.note = st.note;
  res.diverges_at_horizon = st.diverges;
  if (st.diverges) {
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  // E[X^2 / max(|X|, r)^2] and E[X^2 / max(|X|, Y)].
  auto phi = [&](double r) { return mom.tail_prob(r) + mom.second_below(r) / (r * r); };
  const double phiY = phi(st.Y);
  Neumaier<double> acc;
  for (double r : st.jumps) acc += 0.5 * (phi(r) - phiY);
  res.horizon_part = acc.value();
  res.tail_part = st.s * (mom.first_above(st.Y) + mom.second_below(st.Y) / st.Y);
  res.value = res.horizon_part + res.tail_part;
  return res;
}

/// Empirical evaluation: the sample mean of x^2 I(|x|).
inline IntegralResult integral_criterion(const WeightSequence& w, const std::vector<double>& sample) {
  require(!sample.empty(), "integral_criterion: empty sample");
  const auto st = detail::integral_setup(w);
  IntegralResult res;
  res.Y = st.Y;
  res.slope = st.s;
  res.note = st.note;
  res.diverges_at_horizon = st.diverges;
  if (st.diverges) {
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  // Prefix sums over sorted jumps give I(a) in O(log N).
  const auto& J = st.jumps;
  std::vector<double> inv_sq_suffix(J.size() + 1, 0.0);
  for (std::size_t i = J.size(); i-- > 0;) inv_sq_suffix[i] = inv_sq_suffix[i + 1] + 0.5 / (J[i] * J[i]);
  Neumaier<double> acc;
  for (double x : sample) {
    const double a = std::abs(x);
    if (a == 0) continue;
    const double aY = std::max(a, st.Y);
    const auto idx = static_cast<std::size_t>(std::upper_bound(J.begin(), J.end(), a) - J.begin());
    const double below = static_cast<double>(idx) * 0.5 / (a * a);
    const double inner = below + inv_sq_suffix[idx] - static_cast<double>(J.size()) * 0.5 / (aY * aY) + st.s / aY;
    acc += a * a * inner;
  }
  res.value = acc.value() / static_cast<double>(sample.size());
  res.horizon_part = res.value;
  return res;
}

}  // namespace asln
