#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asln/distribution.hpp"
#include "asln/errors.hpp"
#include "asln/numeric.hpp"
#include "asln/primes.hpp"
#include "asln/tables.hpp"
#include "asln/weights.hpp"

namespace asln {

// -----------------------------------------------------------------------------
// Counter-based sampling
// -----------------------------------------------------------------------------

inline constexpr const char* kRngName = "splitmix64-counter";

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// 64 random bits for index k under master_seed. A pure function of both, so
/// any partition of the index range reproduces the sequential stream.
inline std::uint64_t counter_bits(std::uint64_t master_seed, std::uint64_t k) {
  const std::uint64_t key = detail::splitmix_finalize(master_seed + detail::kGolden);
  return detail::splitmix_finalize(key + k * detail::kGolden);
}

/// Uniform on (0, 1), never 0 or 1.
inline double counter_uniform(std::uint64_t master_seed, std::uint64_t k) {
  return (static_cast<double>(counter_bits(master_seed, k) >> 11) + 0.5) * 0x1.0p-53;
}

/// X_1, X_2, ... i.i.d. with law `dist`, sample k drawn by inverse CDF from
/// counter_uniform(master_seed, k).
class SampleStream {
 public:
  SampleStream(DistributionSpec dist, std::uint64_t master_seed) : dist_(dist), seed_(master_seed) {}

  double operator()(std::uint64_t k) const { return dist_.quantile(counter_uniform(seed_, k)); }

  const DistributionSpec& dist() const { return dist_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<double> take(std::uint64_t n) const {
    require(n >= 1, "sample_iid: n must be positive");
    std::vector<double> out(n);
    for (std::uint64_t k = 1; k <= n; ++k) out[k - 1] = (*this)(k);
    return out;
  }

 private:
  DistributionSpec dist_;
  std::uint64_t seed_;
};

inline SampleStream sample_iid(const DistributionSpec& dist, std::uint64_t master_seed) {
  return SampleStream(dist, master_seed);
}

/// Any index -> value map; k is 1-based.
using SampleFn = std::function<double(std::uint64_t)>;

// -----------------------------------------------------------------------------
// Weighted averages
// -----------------------------------------------------------------------------

struct SimulationRun {
  std::uint64_t master_seed = 0;
  DistributionSpec dist;
  std::string weights;
  std::string rng = kRngName;
  double reference = 0;  // the mean, or the Cauchy location for negative controls
  bool negative_control = false;
  std::vector<std::uint64_t> checkpoints;  // those actually reported
  std::vector<cplx> M;
  std::vector<double> deviation;  // |M_n - reference|
  std::vector<std::string> diagnostics;
};

struct SimulationOptions {
  unsigned threads = 1;
  bool negative_control = false;  // required for laws without a mean
  std::uint64_t chunk = 4096;
};

/// M_n = sum_{m<=n} w_m X_m / W_n at each checkpoint. Segments between fixed
/// chunk boundaries and checkpoints are summed independently (Neumaier) and
/// merged left to right, so the result does not depend on the thread count.
inline SimulationRun weighted_average_path(const WeightSequence& w, const SampleFn& x,
                                           std::vector<std::uint64_t> checkpoints, const DistributionSpec& dist,
                                           std::uint64_t master_seed, const SimulationOptions& opt = {}) {
  require(!checkpoints.empty(), "weighted_average_path: no checkpoints");
  require(opt.chunk >= 1, "weighted_average_path: chunk must be positive");
  if (!dist.integrable() && !opt.negative_control)
    throw PreconditionError("weighted_average_path: " + dist.to_string() +
                            " has no mean; only negative-control runs accept it");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  require(checkpoints.front() >= 1, "weighted_average_path: checkpoints must be positive");
  const std::uint64_t n_max = checkpoints.back();
  require(n_max <= w.N(), "weighted_average_path: checkpoint beyond the weight horizon");

  // Segment ends: every chunk boundary and every checkpoint.
  std::vector<std::uint64_t> ends;
  {
    std::size_t c = 0;
    for (std::uint64_t b = opt.chunk;; b += opt.chunk) {
      const std::uint64_t cut = std::min(b, n_max);
      while (c < checkpoints.size() && checkpoints[c] < cut) ends.push_back(checkpoints[c++]);
      ends.push_back(cut);
      if (c < checkpoints.size() && checkpoints[c] == cut) ++c;
      if (cut == n_max) break;
    }
  }
  std::vector<Neumaier<cplx>> partial(ends.size());
  parallel_for(ends.size(), opt.threads, [&](std::size_t i) {
    const std::uint64_t begin = i == 0 ? 1 : ends[i - 1] + 1;
    Neumaier<cplx> acc;
    for (std::uint64_t m = begin; m <= ends[i]; ++m) acc += w.w(m) * x(m);
    partial[i] = acc;
  });

  SimulationRun run;
  run.master_seed = master_seed;
  run.dist = dist;
  run.weights = w.name();
  run.reference = dist.reference_value();
  run.negative_control = opt.negative_control;
  Neumaier<cplx> total;
  std::size_t c = 0;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    total.merge(partial[i]);
    if (c < checkpoints.size() && ends[i] == checkpoints[c]) {
      const std::uint64_t n = checkpoints[c++];
      const cplx W = w.W(n);
      if (std::abs(W) == 0) {
        run.diagnostics.push_back("W_n = 0 at checkpoint n=" + std::to_string(n) + "; skipped");
        continue;
      }
      const cplx M = total.value() / W;
      run.checkpoints.push_back(n);
      run.M.push_back(M);
      run.deviation.push_back(std::abs(M - run.reference));
    }
  }
  return run;
}

inline SimulationRun weighted_average_path(const WeightSequence& w, const SampleStream& s,
                                           const std::vector<std::uint64_t>& checkpoints,
                                           const SimulationOptions& opt = {}) {
  return weighted_average_path(w, SampleFn(s), checkpoints, s.dist(), s.seed(), opt);
}

// -----------------------------------------------------------------------------
// Rearrangement over prime progressions
// -----------------------------------------------------------------------------

struct DecompositionCheck {
  std::uint64_t n = 0;
  cplx direct{}, via_primes{};
  double abs_diff = 0, rel_diff = 0;
};

/// sum_{m<=n} f(m) X_m against sum_{p<=n} f(p) sum_{k<=n/p} X_{kp}.
inline DecompositionCheck prime_decomposition_check(const ArithmeticTables& t, const PrimeTable& primes,
                                                    const SampleFn& x, std::uint64_t n) {
  require(n >= 1 && n <= 100000, "prime_decomposition_check: need 1 <= n <= 1e5");
  require(n <= t.N && n <= primes.N, "prime_decomposition_check: n exceeds the tables");
  std::vector<double> xs(n + 1, 0.0);
  for (std::uint64_t m = 1; m <= n; ++m) xs[m] = x(m);
  Neumaier<cplx> direct, split;
  for (std::uint64_t m = 1; m <= n; ++m) direct += t.f[m] * xs[m];
  for (auto p : primes.primes) {
    if (p > n) break;
    Neumaier<double> inner;
    for (std::uint64_t kp = p; kp <= n; kp += p) inner += xs[kp];
    split += t.f[p] * inner.value();
  }
  DecompositionCheck r;
  r.n = n;
  r.direct = direct.value();
  r.via_primes = split.value();
  r.abs_diff = std::abs(r.direct - r.via_primes);
  const double scale = std::max(std::abs(r.direct), std::abs(r.via_primes));
  r.rel_diff = scale > 0 ? r.abs_diff / scale : 0.0;
  return r;
}

// -----------------------------------------------------------------------------
// Convergence summary across seeds
// -----------------------------------------------------------------------------

struct Tolerance {
  std::uint64_t n = 0;
  double max_deviation = 0;
};

struct ConvergenceReport {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> median_deviation, max_deviation;
  std::optional<double> slope;  // OLS slope of log median deviation on log n
  bool decays = false;          // slope <= -log10(2): halving per decade or faster
  bool passes = true;           // every scheduled tolerance met
  std::vector<std::string> failures;
};

inline const double kDecayPerDecade = -std::log10(2.0);

inline ConvergenceReport convergence_report(const std::vector<SimulationRun>& runs,
                                            const std::vector<Tolerance>& schedule = {}) {
  if (runs.empty()) throw PreconditionError("convergence_report: empty run list");
  const auto& first = runs.front();
  for (const auto& r : runs) {
    require(r.weights == first.weights && r.dist.to_string() == first.dist.to_string(),
            "convergence_report: runs must share weights and distribution");
    require(r.checkpoints == first.checkpoints, "convergence_report: runs must share checkpoints");
  }
  ConvergenceReport rep;
  rep.checkpoints = first.checkpoints;
  std::vector<double> lx, ly;
  bool all_zero = true;
  for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
    std::vector<double> devs;
    for (const auto& r : runs) devs.push_back(r.deviation[i]);
    const double med = median(devs);
    const double mx = *std::max_element(devs.begin(), devs.end());
    rep.median_deviation.push_back(med);
    rep.max_deviation.push_back(mx);
    if (mx > 0) all_zero = false;
    if (med > 0) {
      lx.push_back(std::log10(static_cast<double>(rep.checkpoints[i])));
      ly.push_back(std::log10(med));
    }
  }
  if (lx.size() >= 2 && lx.back() > lx.front()) rep.slope = ols_slope(lx, ly);
  rep.decays = all_zero || (rep.slope && *rep.slope <= kDecayPerDecade);
  for (const auto& tol : schedule) {
    const auto it = std::find(rep.checkpoints.begin(), rep.checkpoints.end(), tol.n);
    if (it == rep.checkpoints.end()) {
      rep.passes = false;
      rep.failures.push_back("no checkpoint n=" + std::to_string(tol.n));
      continue;
    }
    const double got = rep.max_deviation[static_cast<std::size_t>(it - rep.checkpoints.begin())];
    if (!(got <= tol.max_deviation)) {
      rep.passes = false;
      rep.failures.push_back("n=" + std::to_string(tol.n) + ": max deviation " + std::to_string(got) + " > " +
                             std::to_string(tol.max_deviation));
    }
  }
  return rep;
}

}  // namespace asln
