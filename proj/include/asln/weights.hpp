#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "asln/errors.hpp"
#include "asln/numeric.hpp"
#include "asln/primes.hpp"
#include "asln/tables.hpp"

namespace asln {

/// Weights w_1..w_N with prefix sums W_n (and G_n = sum |w_m|^2). For the
/// additive source w_n = f(n) and W_n = F(n) are copied from the tables.
class WeightSequence {
 public:
  enum class Source { additive, general };

  static WeightSequence from_tables(const ArithmeticTables& t) {
    WeightSequence s;
    s.source_ = Source::additive;
    s.name_ = t.spec_name;
    s.w_ = t.f;
    s.W_ = t.F;
    s.G_ = t.G;
    s.real_ = t.real_valued;
    s.nonneg_ = t.nonnegative;
    return s;
  }

  /// `w` holds w_1..w_N (no leading slot).
  static WeightSequence general(const std::vector<cplx>& w, std::string name = "general") {
    require(!w.empty(), "WeightSequence: empty weight array");
    WeightSequence s;
    s.source_ = Source::general;
    s.name_ = std::move(name);
    const std::size_t N = w.size();
    s.w_.assign(N + 1, 0.0);
    s.W_.assign(N + 1, 0.0);
    s.G_.assign(N + 1, 0.0);
    Neumaier<cplx> W;
    Neumaier<double> G;
    for (std::size_t n = 1; n <= N; ++n) {
      s.w_[n] = w[n - 1];
      W += w[n - 1];
      G += std::norm(w[n - 1]);
      s.W_[n] = W.value();
      s.G_[n] = G.value();
      if (w[n - 1].imag() != 0) s.real_ = false;
      if (w[n - 1].real() < 0) s.nonneg_ = false;
    }
    s.nonneg_ = s.nonneg_ && s.real_;
    return s;
  }

  static WeightSequence unit(std::uint64_t N) { return general(std::vector<cplx>(N, 1.0), "unit"); }

  static WeightSequence alternating(std::uint64_t N) {
    std::vector<cplx> w(N);
    for (std::uint64_t k = 1; k <= N; ++k) w[k - 1] = (k % 2 == 0) ? 1.0 : -1.0;
    return general(w, "alternating");
  }

  /// Lambda(n) = log p at prime powers p^k, 0 elsewhere.
  static WeightSequence von_mangoldt(const PrimeTable& primes, std::uint64_t N) {
    require(N <= primes.N, "von_mangoldt: horizon exceeds prime table");
    std::vector<cplx> w(N, 0.0);
    for (std::uint64_t n = 2; n <= N; ++n) {
      const std::uint64_t p = primes.spf[n];
      std::uint64_t m = n;
      while (m % p == 0) m /= p;
      if (m == 1) w[n - 1] = std::log(static_cast<double>(p));
    }
    return general(w, "von_mangoldt_weights");
  }

  Source source() const { return source_; }
  const std::string& name() const { return name_; }
  std::uint64_t N() const { return w_.size() - 1; }
  cplx w(std::uint64_t n) const { return w_[n]; }
  cplx W(std::uint64_t n) const { return W_[n]; }
  double G(std::uint64_t n) const { return G_[n]; }
  bool real_valued() const { return real_; }
  bool nonnegative() const { return nonneg_; }

  /// Smallest n0 with |W_n| > 0 for all n >= n0 on the horizon (N + 1 if none).
  std::uint64_t nonzero_from() const {
    std::uint64_t n0 = 1;
    for (std::uint64_t n = 1; n <= N(); ++n)
      if (std::abs(W_[n]) == 0) n0 = n + 1;
    return n0;
  }

 private:
  Source source_ = Source::general;
  std::string name_;
  std::vector<cplx> w_, W_;
  std::vector<double> G_;
  bool real_ = true;
  bool nonneg_ = true;
};

}  // namespace asln
