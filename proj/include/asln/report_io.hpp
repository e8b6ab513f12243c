#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "json.hpp"

#include "asln/criteria.hpp"
#include "asln/simulate.hpp"
#include "asln/walk.hpp"

namespace asln {

using ojson = nlohmann::ordered_json;

/// Shortest text that reads back to the same double; inf and nan spelled out.
inline std::string fmt_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

/// JSON has no infinities; they are written as null.
inline ojson num_json(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

// -----------------------------------------------------------------------------
// ConditionReport
// -----------------------------------------------------------------------------

inline ojson grid_json(const std::vector<GridPoint>& grid) {
  ojson g = ojson::array();
  for (const auto& p : grid) g.push_back({p.n, num_json(p.lhs), num_json(p.rhs), num_json(p.ratio)});
  return g;
}

inline ojson to_json(const ConditionReport& r) {
  ojson j;
  j["condition_id"] = std::string(to_string(r.id));
  j["params"] = r.params;
  j["grid"] = grid_json(r.grid);
  j["verdict"] = std::string(to_string(r.verdict));
  j["fitted_constant"] = num_json(r.fitted_constant);
  ojson profiles = ojson::array();
  for (const auto& p : r.profiles) {
    profiles.push_back({{"name", p.name},
                        {"trend", std::string(to_string(p.trend))},
                        {"verdict", std::string(to_string(p.verdict))},
                        {"fitted_constant", num_json(p.fitted_constant)},
                        {"grid", grid_json(p.grid)}});
  }
  j["profiles"] = profiles;
  j["diagnostics"] = r.diagnostics;
  return j;
}

/// One row per grid point of every profile; the headline profile comes first.
inline std::string to_csv(const ConditionReport& r) {
  std::ostringstream os;
  os << "condition_id,profile,n,lhs,rhs,ratio\n";
  for (const auto& p : r.profiles)
    for (const auto& g : p.grid)
      os << to_string(r.id) << ",\"" << p.name << "\"," << g.n << ',' << fmt_num(g.lhs) << ',' << fmt_num(g.rhs)
         << ',' << fmt_num(g.ratio) << '\n';
  return os.str();
}

// -----------------------------------------------------------------------------
// SimulationRun
// -----------------------------------------------------------------------------

inline ojson to_json(const SimulationRun& r) {
  ojson j;
  j["master_seed"] = r.master_seed;
  j["rng"] = r.rng;
  j["dist"] = r.dist.to_string();
  j["weights"] = r.weights;
  j["reference"] = r.reference;
  j["negative_control"] = r.negative_control;
  j["checkpoints"] = r.checkpoints;
  ojson re = ojson::array(), im = ojson::array();
  for (const auto& m : r.M) {
    re.push_back(num_json(m.real()));
    im.push_back(num_json(m.imag()));
  }
  j["M_re"] = re;
  j["M_im"] = im;
  ojson dev = ojson::array();
  for (double d : r.deviation) dev.push_back(num_json(d));
  j["deviation"] = dev;
  j["diagnostics"] = r.diagnostics;
  return j;
}

inline std::string to_csv(const SimulationRun& r) {
  std::ostringstream os;
  os << "n,re,im,deviation\n";
  for (std::size_t i = 0; i < r.checkpoints.size(); ++i)
    os << r.checkpoints[i] << ',' << fmt_num(r.M[i].real()) << ',' << fmt_num(r.M[i].imag()) << ','
       << fmt_num(r.deviation[i]) << '\n';
  return os.str();
}

inline ojson to_json(const ConvergenceReport& c) {
  ojson j;
  j["checkpoints"] = c.checkpoints;
  j["median_deviation"] = c.median_deviation;
  j["max_deviation"] = c.max_deviation;
  j["slope"] = c.slope ? num_json(*c.slope) : ojson(nullptr);
  j["decays"] = c.decays;
  j["passes"] = c.passes;
  j["failures"] = c.failures;
  return j;
}

// -----------------------------------------------------------------------------
// Divisibility
// -----------------------------------------------------------------------------

inline std::string to_csv(const Lemma4Report& r) {
  std::ostringstream os;
  os << "n,d,exact,theta,abs_error,bound,ratio\n";
  for (const auto& row : r.rows)
    os << row.n << ',' << row.d << ',' << fmt_num(row.exact) << ',' << fmt_num(row.theta) << ','
       << fmt_num(row.abs_error) << ',' << fmt_num(row.bound) << ',' << fmt_num(row.ratio) << '\n';
  return os.str();
}

inline ojson to_json(const RegimeSup& s) {
  return {{"argmax_d", s.argmax_d}, {"sup_error", num_json(s.sup_error)},
          {"fitted_constant", num_json(s.fitted_constant)}};
}

inline ojson to_json(const Lemma4Report& r) {
  ojson sums = ojson::array();
  for (const auto& s : r.summaries)
    sums.push_back({{"n", s.n},
                    {"rho", s.rho},
                    {"eps", s.eps},
                    {"theta_uniform", to_json(s.theta_uniform)},
                    {"small_d", to_json(s.small_d)},
                    {"large_d", to_json(s.large_d)},
                    {"stretched", to_json(s.stretched)}});
  return {{"summaries", sums}};
}

inline ojson to_json(const EtaGridReport& r) {
  ojson rows = ojson::array();
  for (const auto& e : r.rows)
    rows.push_back({{"rho", e.rho}, {"N", e.N}, {"stay_prob", num_json(e.stay_prob)},
                    {"lower_bound_eta", e.lower_bound_eta}});
  return {{"N", r.N}, {"threshold", r.threshold}, {"rows", rows}, {"lower_bound_eta", r.lower_bound_eta}};
}

inline std::string to_csv(const EtaGridReport& r) {
  std::ostringstream os;
  os << "rho,N,stay_prob\n";
  for (const auto& e : r.rows) os << fmt_num(e.rho) << ',' << e.N << ',' << fmt_num(e.stay_prob) << '\n';
  return os.str();
}

inline ojson to_json(const SecondMoment& s) {
  return {{"n", s.n},
          {"oracle_value", num_json(s.oracle_value)},
          {"pair_formula_value", num_json(s.pair_formula_value)},
          {"lemma_bound", num_json(s.lemma_bound)},
          {"holds", s.holds},
          {"h", s.h},
          {"C_h", s.C_h},
          {"C_eps", s.C_eps}};
}

inline ojson to_json(const DecompositionCheck& d) {
  return {{"n", d.n},
          {"direct", {num_json(d.direct.real()), num_json(d.direct.imag())}},
          {"via_primes", {num_json(d.via_primes.real()), num_json(d.via_primes.imag())}},
          {"abs_diff", num_json(d.abs_diff)},
          {"rel_diff", num_json(d.rel_diff)}};
}

inline ojson to_json(const IntegralResult& r) {
  return {{"value", num_json(r.value)},         {"horizon_part", num_json(r.horizon_part)},
          {"tail_part", num_json(r.tail_part)}, {"Y", num_json(r.Y)},
          {"slope", num_json(r.slope)},         {"diverges_at_horizon", r.diverges_at_horizon},
          {"note", r.note}};
}

}  // namespace asln
