#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "asln/errors.hpp"

namespace asln {

using cplx = std::complex<double>;

// -----------------------------------------------------------------------------
// Compensated summation
// -----------------------------------------------------------------------------

/// Neumaier (improved Kahan) accumulator. Works for double and complex<double>;
/// the complex case compensates real and imaginary parts independently.
template <typename T>
class Neumaier {
 public:
  Neumaier() = default;
  explicit Neumaier(T init) : sum_(init) {}

  void add(T x) {
    if constexpr (std::is_same_v<T, cplx>) {
      double re = sum_.real(), im = sum_.imag();
      double cre = comp_.real(), cim = comp_.imag();
      step(re, cre, x.real());
      step(im, cim, x.imag());
      sum_ = {re, im};
      comp_ = {cre, cim};
    } else {
      step(sum_, comp_, x);
    }
  }

  /// Merge another accumulator; the order of merges is the caller's
  /// responsibility when bit-level reproducibility matters.
  void merge(const Neumaier& other) {
    add(other.sum_);
    add(other.comp_);
  }

  Neumaier& operator+=(T x) {
    add(x);
    return *this;
  }

  T value() const { return sum_ + comp_; }

 private:
  static void step(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  T sum_{};
  T comp_{};
};

/// Error-free transformation a + b = s + e.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

// -----------------------------------------------------------------------------
// Small parallel helper
// -----------------------------------------------------------------------------

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
/// claimed in a fixed round-robin so any result written to slot i depends only
/// on i, never on the worker count.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// -----------------------------------------------------------------------------
// Grids and fits
// -----------------------------------------------------------------------------

/// Powers of two 2^lo .. 2^hi, optionally capped at `cap` (cap itself is
/// appended when it is not a power of two).
inline std::vector<std::uint64_t> dyadic_grid(unsigned lo, unsigned hi, std::uint64_t cap = 0) {
  std::vector<std::uint64_t> grid;
  for (unsigned k = lo; k <= hi; ++k) {
    const std::uint64_t v = std::uint64_t{1} << k;
    if (cap != 0 && v > cap) break;
    grid.push_back(v);
  }
  if (cap != 0 && (grid.empty() || grid.back() < cap))
    grid.push_back(cap);
  return grid;
}

/// Dyadic grid 2, 4, ... up to n_max, with n_max appended.
inline std::vector<std::uint64_t> dyadic_up_to(std::uint64_t n_max, unsigned lo = 1) {
  return dyadic_grid(lo, 63, n_max);
}

/// Ordinary least-squares slope of y on x.
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "ols_slope: need at least two paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0, "ols_slope: degenerate abscissae");
  return sxy / sxx;
}

/// floor(n^h) for 0 < h < 1, corrected against rounding in pow().
inline std::uint64_t floor_power(std::uint64_t n, double h) {
  if (n == 0) return 0;
  auto v = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(n), h)));
  const double lg = std::log(static_cast<double>(n)) * h;
  while (v > 0 && std::log(static_cast<double>(v)) > lg + 1e-15) --v;
  while (std::log(static_cast<double>(v + 1)) <= lg - 1e-15) ++v;
  return v;
}

inline double median(std::vector<double> v) {
  require(!v.empty(), "median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace asln
