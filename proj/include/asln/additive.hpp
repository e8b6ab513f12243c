#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "asln/errors.hpp"
#include "asln/numeric.hpp"
#include "asln/primes.hpp"

namespace asln {

enum class Preset { omega, log_prime, complex_quadratic_phase, von_mangoldt_weights };

inline std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::omega: return "omega";
    case Preset::log_prime: return "log_prime";
    case Preset::complex_quadratic_phase: return "complex_quadratic_phase";
    case Preset::von_mangoldt_weights: return "von_mangoldt_weights";
  }
  return "?";
}

inline Preset parse_preset(std::string_view name) {
  for (Preset p : {Preset::omega, Preset::log_prime, Preset::complex_quadratic_phase,
                   Preset::von_mangoldt_weights})
    if (preset_name(p) == name) return p;
  throw PreconditionError("unknown preset '" + std::string(name) + "'");
}

/// A strongly additive function described by its values on primes, either a
/// named preset or an explicit table with a default for unlisted primes.
///
/// von_mangoldt_weights is carried here for convenience but is not additive;
/// table-building operations reject it.
class AdditiveFunctionSpec {
 public:
  enum class Kind { preset, table };

  static AdditiveFunctionSpec preset(Preset p) {
    AdditiveFunctionSpec s;
    s.kind_ = Kind::preset;
    s.preset_ = p;
    return s;
  }

  /// Every key must be prime.
  static AdditiveFunctionSpec table(std::map<std::uint64_t, cplx> values, cplx default_value = {}) {
    for (const auto& [p, v] : values) {
      if (!is_prime_u64(p))
        throw PreconditionError("table key " + std::to_string(p) + " is not prime");
      (void)v;
    }
    AdditiveFunctionSpec s;
    s.kind_ = Kind::table;
    s.table_ = std::move(values);
    s.default_ = default_value;
    return s;
  }

  Kind kind() const { return kind_; }
  Preset preset_id() const { return preset_; }
  const std::map<std::uint64_t, cplx>& table_values() const { return table_; }
  cplx default_value() const { return default_; }

  bool additive() const { return !(kind_ == Kind::preset && preset_ == Preset::von_mangoldt_weights); }

  bool real_valued() const {
    if (kind_ == Kind::preset) return preset_ != Preset::complex_quadratic_phase;
    if (default_.imag() != 0) return false;
    for (const auto& kv : table_)
      if (kv.second.imag() != 0) return false;
    return true;
  }

  bool nonnegative() const {
    if (!real_valued()) return false;
    if (kind_ == Kind::preset) return true;
    if (default_.real() < 0) return false;
    for (const auto& kv : table_)
      if (kv.second.real() < 0) return false;
    return true;
  }

  std::string name() const {
    if (kind_ == Kind::preset) return std::string(preset_name(preset_));
    return "table";
  }

  /// f(p) for a prime p (the caller guarantees primality).
  cplx at_prime(std::uint64_t p) const {
    if (kind_ == Kind::table) {
      auto it = table_.find(p);
      return it == table_.end() ? default_ : it->second;
    }
    switch (preset_) {
      case Preset::omega: return 1.0;
      case Preset::log_prime:
      case Preset::von_mangoldt_weights: return std::log(static_cast<double>(p));
      case Preset::complex_quadratic_phase: {
        const double s = p == 2 ? 0.0 : (p % 4 == 1 ? 1.0 : -1.0);
        return {1.0, s};
      }
    }
    return 0.0;
  }

 private:
  Kind kind_ = Kind::preset;
  Preset preset_ = Preset::omega;
  std::map<std::uint64_t, cplx> table_;
  cplx default_{};
};

/// Parses the user table format: header `prime,re,im`, one row per prime, and
/// a row keyed by prime 0 carrying the default value for unlisted primes.
inline AdditiveFunctionSpec parse_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("table file is empty");
  auto trim = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    return s;
  };
  if (trim(line) != "prime,re,im") throw FormatError("table file must start with header 'prime,re,im'");
  std::map<std::uint64_t, cplx> values;
  cplx def{};
  bool have_default = false;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw FormatError("table line " + std::to_string(lineno) + ": expected three fields");
    try {
      const std::uint64_t p = std::stoull(a);
      const cplx v{std::stod(b), std::stod(c)};
      if (p == 0) {
        def = v;
        have_default = true;
      } else if (!values.emplace(p, v).second) {
        throw FormatError("table line " + std::to_string(lineno) + ": duplicate prime");
      }
    } catch (const std::logic_error&) {
      throw FormatError("table line " + std::to_string(lineno) + ": bad number");
    }
  }
  if (!have_default) throw FormatError("table file lacks the default row (prime=0)");
  return AdditiveFunctionSpec::table(std::move(values), def);
}

inline AdditiveFunctionSpec load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read table file '" + path + "'");
  return parse_table_csv(in);
}

}  // namespace asln
