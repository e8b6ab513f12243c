#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "asln/errors.hpp"

namespace asln {

/// Law of the i.i.d. inputs X_k. Text form: `const:c`, `exp:rate`,
/// `pareto:alpha:xmin`, `uniform:a:b`, `cauchy:loc:scale`, optionally
/// followed by `:centered` (subtract the mean).
struct DistributionSpec {
  enum class Kind { constant, exponential, pareto, uniform, cauchy };
  Kind kind = Kind::constant;
  double p1 = 0, p2 = 0;
  bool centered = false;

  static DistributionSpec constant(double c) { return {Kind::constant, c, 0, false}; }
  static DistributionSpec exponential(double rate) {
    require(rate > 0, "exponential: rate must be positive");
    return {Kind::exponential, rate, 0, false};
  }
  static DistributionSpec pareto(double alpha, double x_min) {
    require(alpha > 0 && x_min > 0, "pareto: alpha and x_min must be positive");
    return {Kind::pareto, alpha, x_min, false};
  }
  static DistributionSpec uniform(double a, double b) {
    require(a < b, "uniform: need a < b");
    return {Kind::uniform, a, b, false};
  }
  static DistributionSpec cauchy(double loc = 0, double scale = 1) {
    require(scale > 0, "cauchy: scale must be positive");
    return {Kind::cauchy, loc, scale, false};
  }

  DistributionSpec as_centered() const {
    require(raw_mean().has_value(), "centered variant needs a finite mean");
    DistributionSpec d = *this;
    d.centered = true;
    return d;
  }

  /// Mean before centring; absent when E|X| is infinite.
  std::optional<double> raw_mean() const {
    switch (kind) {
      case Kind::constant: return p1;
      case Kind::exponential: return 1.0 / p1;
      case Kind::pareto:
        if (p1 <= 1) return std::nullopt;
        return p1 * p2 / (p1 - 1);
      case Kind::uniform: return 0.5 * (p1 + p2);
      case Kind::cauchy: return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<double> mean() const {
    auto m = raw_mean();
    if (m && centered) return 0.0;
    return m;
  }

  bool integrable() const { return raw_mean().has_value(); }

  /// Value every deviation is measured against: the mean, or the location of
  /// a Cauchy law (its median), for negative controls.
  double reference_value() const {
    if (auto m = mean()) return *m;
    return kind == Kind::cauchy ? p1 : 0.0;
  }

  /// Inverse CDF at u in (0, 1).
  double quantile(double u) const {
    double x = 0;
    switch (kind) {
      case Kind::constant: x = p1; break;
      case Kind::exponential: x = -std::log1p(-u) / p1; break;
      case Kind::pareto: x = p2 * std::pow(1.0 - u, -1.0 / p1); break;
      case Kind::uniform: x = p1 + (p2 - p1) * u; break;
      case Kind::cauchy: x = p1 + p2 * std::tan(std::numbers::pi * (u - 0.5)); break;
    }
    return centered ? x - *raw_mean() : x;
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
      case Kind::constant: os << "const:" << p1; break;
      case Kind::exponential: os << "exp:" << p1; break;
      case Kind::pareto: os << "pareto:" << p1 << ':' << p2; break;
      case Kind::uniform: os << "uniform:" << p1 << ':' << p2; break;
      case Kind::cauchy: os << "cauchy:" << p1 << ':' << p2; break;
    }
    if (centered) os << ":centered";
    return os.str();
  }
};

inline DistributionSpec parse_distribution(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  bool centered = false;
  if (parts.size() > 1 && parts.back() == "centered") {
    centered = true;
    parts.pop_back();
  }
  auto num = [&](std::size_t i, double fallback) {
    if (i >= parts.size()) return fallback;
    try {
      std::size_t used = 0;
      double v = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::logic_error&) {
      throw PreconditionError("bad number '" + parts[i] + "' in distribution '" + std::string(text) + "'");
    }
  };
  const std::string& k = parts[0];
  DistributionSpec d;
  if (k == "const" || k == "constant") {
    require(parts.size() == 2, "const takes one parameter");
    d = DistributionSpec::constant(num(1, 0));
  } else if (k == "exp" || k == "exponential") {
    require(parts.size() <= 2, "exp takes one parameter");
    d = DistributionSpec::exponential(num(1, 1));
  } else if (k == "pareto") {
    require(parts.size() == 3, "pareto takes alpha and x_min");
    d = DistributionSpec::pareto(num(1, 0), num(2, 0));
  } else if (k == "uniform") {
    require(parts.size() == 3, "uniform takes a and b");
    d = DistributionSpec::uniform(num(1, 0), num(2, 0));
  } else if (k == "cauchy") {
    require(parts.size() <= 3, "cauchy takes location and scale");
    d = DistributionSpec::cauchy(num(1, 0), num(2, 1));
  } else {
    throw PreconditionError("unknown distribution '" + std::string(text) + "'");
  }
  return centered ? d.as_centered() : d;
}

// -----------------------------------------------------------------------------
// Truncated moments of |X|, used by the integral criterion
// -----------------------------------------------------------------------------

/// Closed-form truncated moments of |X|. Available for non-centred constant,
/// exponential and integrable Pareto laws, and for uniform laws (centred or
/// not). Other cases should go through an empirical sample.
class AbsMoments {
 public:
  explicit AbsMoments(const DistributionSpec& d) : d_(d) {
    using K = DistributionSpec::Kind;
    require(d.integrable(), "integral criterion: E|X| must be finite");
    if (d.kind == K::uniform) {
      const double shift = d.centered ? *d.raw_mean() : 0.0;
      lo_ = d.p1 - shift;
      hi_ = d.p2 - shift;
    } else {
      require(!d.centered, "integral criterion: centred " + d.to_string() +
                               " has no closed form here; pass an empirical sample");
    }
  }

  /// P{|X| >= r}
  double tail_prob(double r) const {
    using K = DistributionSpec::Kind;
    switch (d_.kind) {
      case K::constant: return std::abs(d_.p1) >= r ? 1.0 : 0.0;
      case K::exponential: return r <= 0 ? 1.0 : std::exp(-d_.p1 * r);
      case K::pareto: return r <= d_.p2 ? 1.0 : std::pow(d_.p2 / r, d_.p1);
      case K::uniform: return uniform_abs(r, 0);
      case K::cauchy: break;
    }
    return 0;
  }

  /// E[X^2; |X| < r]
  double second_below(double r) const {
    using K = DistributionSpec::Kind;
    switch (d_.kind) {
      case K::constant: return std::abs(d_.p1) < r ? d_.p1 * d_.p1 : 0.0;
      case K::exponential: {
        if (r <= 0) return 0.0;
        const double l = d_.p1, x = l * r;
        return (2.0 / (l * l)) * (1.0 - std::exp(-x) * (1.0 + x + 0.5 * x * x));
      }
      case K::pareto: {
        const double a = d_.p1, m = d_.p2;
        if (r <= m) return 0.0;
        if (std::abs(a - 2.0) < 1e-12) return a * m * m * std::log(r / m);
        return a * std::pow(m, a) * (std::pow(r, 2.0 - a) - std::pow(m, 2.0 - a)) / (2.0 - a);
      }
      case K::uniform: return uniform_abs(r, 2);
      case K::cauchy: break;
    }
    return 0;
  }

  /// E[|X|; |X| >= r]
  double first_above(double r) const {
    using K = DistributionSpec::Kind;
    switch (d_.kind) {
      case K::constant: return std::abs(d_.p1) >= r ? std::abs(d_.p1) : 0.0;
      case K::exponential: {
        const double l = d_.p1, rr = std::max(r, 0.0);
        return std::exp(-l * rr) * (rr + 1.0 / l);
      }
      case K::pareto: {
        const double a = d_.p1, m = d_.p2, rr = std::max(r, m);
        return a * std::pow(m, a) * std::pow(rr, 1.0 - a) / (a - 1.0);
      }
      case K::uniform: return uniform_abs(r, 1);
      case K::cauchy: break;
    }
    return 0;
  }

 private:
  // Moments of |X| for X ~ U(lo, hi): order 0 and 1 over {|X| >= r}, order 2
  // over {|X| < r}.
  double uniform_abs(double r, int order) const {
    const double width = hi_ - lo_;
    // Integrate |x|^k over the parts of [lo, hi] where |x| >= r (or < r).
    auto integral = [](double a, double b, int k) {  // int_a^b |x|^k dx, a <= b
      auto prim = [k](double x) {
        const double s = x < 0 ? -1.0 : 1.0;
        return s * std::pow(std::abs(x), k + 1) / (k + 1);
      };
      return b > a ? prim(b) - prim(a) : 0.0;
    };
    const double rr = std::max(r, 0.0);
    double acc = 0;
    if (order == 2) {
      const double a = std::max(lo_, -rr), b = std::min(hi_, rr);
      acc = integral(a, b, 2);
    } else {
      acc += integral(lo_, std::min(hi_, -rr), order);
      acc += integral(std::max(lo_, rr), hi_, order);
    }
    return acc / width;
  }

  DistributionSpec d_;
  double lo_ = 0, hi_ = 0;
};

}  // namespace asln
