#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "asln.hpp"

namespace asln::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitGate = 3;

struct Outputs {
  std::ostream& out;
  std::string dir;
  std::vector<std::string> formats;

  bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

  /// The first requested text format goes to stdout; every requested format is
  /// written to <dir>/<stem>.<ext> when a directory was given.
  void emit(const std::string& stem, const std::optional<ojson>& json, const std::optional<std::string>& csv,
            const std::optional<std::string>& svg = std::nullopt) const {
    bool printed = false;
    for (const auto& f : formats) {
      if (printed) break;
      if (f == "json" && json) {
        out << json->dump(2) << '\n';
        printed = true;
      } else if (f == "csv" && csv) {
        out << *csv;
        printed = true;
      }
    }
    if (!printed && json) out << json->dump(2) << '\n';
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& ext, const std::string& body) {
      const auto path = std::filesystem::path(dir) / (stem + "." + ext);
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) throw FormatError("cannot write '" + path.string() + "'");
      f << body;
    };
    if (wants("json") && json) write("json", json->dump(2) + "\n");
    if (wants("csv") && csv) write("csv", *csv);
    if (wants("svg") && svg) write("svg", *svg);
  }
};

namespace detail {

inline AdditiveFunctionSpec spec_of(const ExperimentConfig& c) {
  if (!c.table_path.empty()) return load_table_csv(c.table_path);
  return AdditiveFunctionSpec::preset(parse_preset(c.preset));
}

inline std::string cache_path(const std::string& dir, const std::string& name, std::uint64_t N) {
  return (std::filesystem::path(dir) / (name + "_" + std::to_string(N) + ".asln")).string();
}

/// Tables for the configured spec, through $ASLN_CACHE_DIR for presets.
inline ArithmeticTables tables_of(const ExperimentConfig& c, const PrimeTable& primes, std::uint64_t N) {
  const auto spec = spec_of(c);
  const char* dir = std::getenv("ASLN_CACHE_DIR");
  if (dir && *dir && c.table_path.empty() && spec.additive()) {
    const auto path = cache_path(dir, spec.name(), N);
    if (std::filesystem::exists(path)) {
      auto t = load_tables(path);
      t.spec_name = spec.name();
      return t;
    }
    auto t = eval_additive(spec, primes, N);
    std::filesystem::create_directories(dir);
    save_tables(path, t);
    return t;
  }
  return eval_additive(spec, primes, N);
}

inline WeightSequence weights_of(const ExperimentConfig& c, const PrimeTable& primes, std::uint64_t N,
                                 const ArithmeticTables* tables) {
  if (c.weights == "unit") return WeightSequence::unit(N);
  if (c.weights == "alternating") return WeightSequence::alternating(N);
  if (c.weights == "von_mangoldt" || (c.weights == "additive" && c.table_path.empty() &&
                                      c.preset == "von_mangoldt_weights"))
    return WeightSequence::von_mangoldt(primes, N);
  if (c.weights == "additive") {
    require(tables != nullptr, "additive weights need arithmetic tables");
    return WeightSequence::from_tables(*tables);
  }
  throw PreconditionError("unknown weights '" + c.weights + "'");
}

inline bool needs_tables(const ExperimentConfig& c) {
  return !(c.weights == "unit" || c.weights == "alternating" || c.weights == "von_mangoldt" ||
           (c.table_path.empty() && c.preset == "von_mangoldt_weights"));
}

/// Drops leading grid points where the normaliser of a checker vanishes.
inline std::vector<std::uint64_t> drop_leading(std::vector<std::uint64_t> grid,
                                               const std::function<bool(std::uint64_t)>& degenerate) {
  std::size_t k = 0;
  while (k < grid.size() && degenerate(grid[k])) ++k;
  grid.erase(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(k));
  return grid;
}

inline std::string report_svg(const ConditionReport& r) {
  std::vector<Series> ss;
  for (const auto& p : r.profiles) {
    Series s{p.name, {}, {}};
    for (const auto& g : p.grid) {
      s.x.push_back(static_cast<double>(g.n));
      s.y.push_back(g.ratio);
    }
    ss.push_back(std::move(s));
  }
  ChartOptions o;
  o.title = std::string(to_string(r.id)) + " (" + std::string(to_string(r.verdict)) + ")";
  o.y_label = "ratio";
  return line_chart_svg(ss, o);
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Subcommands
// -----------------------------------------------------------------------------

inline int cmd_sieve(const ExperimentConfig& c, const Outputs& o, bool stream, bool erdos_kac) {
  const auto grid = expand_grid(c.n_grid, c.N);
  ojson doc;
  doc["spec"] = detail::spec_of(c).name();
  doc["N"] = c.N;
  ojson rows = ojson::array();
  std::ostringstream csv;
  csv << "n,F_re,F_im,G,S_A_re,S_A_im,A,B,B_over_log2n\n";
  auto add_row = [&](std::uint64_t n, cplx F, double G, cplx S, double B) {
    const double lg = std::log(static_cast<double>(n));
    const double b_log2 = n >= 2 ? B / (lg * lg) : 0.0;
    rows.push_back({{"n", n}, {"F", {F.real(), F.imag()}}, {"G", G}, {"S_A", {S.real(), S.imag()}},
                    {"A", std::abs(S)}, {"B", B}, {"B_over_log2n", b_log2}});
    csv << n << ',' << fmt_num(F.real()) << ',' << fmt_num(F.imag()) << ',' << fmt_num(G) << ','
        << fmt_num(S.real()) << ',' << fmt_num(S.imag()) << ',' << fmt_num(std::abs(S)) << ',' << fmt_num(B) << ','
        << fmt_num(b_log2) << '\n';
  };
  if (stream) {
    for (const auto& s : stream_prefix_stats(detail::spec_of(c), grid)) add_row(s.n, s.F, s.G, s.S_A, s.B);
  } else {
    const auto primes = build_prime_table(std::max<std::uint64_t>(c.N, 2));
    const auto t = detail::tables_of(c, primes, c.N);
    ojson sandwich = ojson::array();
    for (auto n : grid) {
      require(n <= c.N, "sieve: grid exceeds N");
      add_row(n, t.F[n], t.G[n], t.S_A[n], t.B[n]);
      if (t.nonnegative) {
        const auto s = sandwich_at(t, n);
        sandwich.push_back({{"n", n}, {"lower", s.lower}, {"F", s.F}, {"upper", s.upper}, {"G", s.G},
                            {"G_bound", s.G_bound}, {"ok", s.ok()}});
      }
    }
    if (t.nonnegative) doc["sandwich"] = sandwich;
    if (erdos_kac) {
      const auto ek = erdos_kac_empirical(t, c.N);
      doc["erdos_kac"] = {{"A", ek.A}, {"B", ek.B}, {"ks_distance", ek.ks_distance}, {"ks_at", ek.ks_at},
                          {"z", ek.z}, {"ecdf", ek.ecdf}};
    }
  }
  doc["rows"] = rows;
  o.emit("sieve", doc, csv.str());
  return kExitOk;
}

inline std::vector<std::string> all_checks() {
  return {"lindeberg", "cond_1_7", "cond_1_8", "cond_1_9", "cond_1_10", "cond_1_12", "cond_1_13", "maincond",
          "jop_limsup"};
}

inline ConditionReport run_check(const std::string& check, const ExperimentConfig& c, const PrimeTable& primes,
                                 const ArithmeticTables* t) {
  const auto id = parse_condition_id(check);
  auto n_grid = expand_grid(c.n_grid, c.N);
  auto t_grid = expand_grid(c.t_grid, c.N);
  auto need = [&]() -> const ArithmeticTables& {
    if (!t) throw PreconditionError(check + ": needs a strongly additive function");
    return *t;
  };
  switch (id) {
    case ConditionId::lindeberg: {
      const auto& tt = need();
      n_grid = detail::drop_leading(n_grid, [&](std::uint64_t n) { return n <= tt.N && !(tt.B[n] > 0); });
      return lindeberg_profile(tt, primes, c.eps, n_grid);
    }
    case ConditionId::cond_1_7: return cond_1_7(need(), primes, n_grid);
    case ConditionId::cond_1_8: return cond_1_8_tail(need(), primes, t_grid);
    case ConditionId::cond_1_9: {
      const auto& tt = need();
      n_grid = detail::drop_leading(n_grid, [&](std::uint64_t n) { return n <= tt.N && !(tt.A(n) > 0); });
      return asln::cond_1_9(tt, n_grid);
    }
    case ConditionId::cond_1_10: return asln::cond_1_10(need(), n_grid);
    case ConditionId::cond_1_12: return cond_1_12_tail(detail::weights_of(c, primes, c.N, t), t_grid);
    case ConditionId::cond_1_13: {
      const auto w = detail::weights_of(c, primes, c.N, t);
      if (!n_grid.empty() && n_grid.back() == c.N) n_grid.back() = c.N - 1;
      return asln::cond_1_13(w, make_H(c.H, t), n_grid);
    }
    case ConditionId::maincond: {
      const auto& tt = need();
      n_grid = detail::drop_leading(n_grid, [&](std::uint64_t n) {
        const auto m = static_cast<std::uint64_t>(std::floor(c.eta * static_cast<double>(n)));
        return m == 0 || (m <= tt.N && std::abs(tt.F[m]) == 0);
      });
      return maincond_profile(tt, primes, c.h, c.eta, n_grid);
    }
    case ConditionId::jop_limsup: return jop_limsup_check(detail::weights_of(c, primes, c.N, t), t_grid);
  }
  throw PreconditionError("unknown condition");
}

inline int cmd_conditions(const ExperimentConfig& c, const Outputs& o) {
  const auto checks = c.checks.empty() ? all_checks() : c.checks;
  const auto primes = build_prime_table(std::max<std::uint64_t>(c.N, 2));
  std::optional<ArithmeticTables> t;
  if (detail::needs_tables(c)) t = detail::tables_of(c, primes, c.N);
  bool any_fail = false;
  ojson all = ojson::array();
  for (const auto& check : checks) {
    const auto r = run_check(check, c, primes, t ? &*t : nullptr);
    if (r.verdict == Verdict::fails) any_fail = true;
    if (checks.size() == 1) {
      o.emit("conditions_" + check, to_json(r), to_csv(r), detail::report_svg(r));
    } else {
      all.push_back(to_json(r));
      if (!o.dir.empty()) {
        std::ostringstream sink;
        Outputs files{sink, o.dir, o.formats};
        files.emit("conditions_" + check, to_json(r), to_csv(r), detail::report_svg(r));
      }
    }
  }
  if (checks.size() > 1) o.out << all.dump(2) << '\n';
  return (c.gate && any_fail) ? kExitGate : kExitOk;
}

struct DivisibilityArgs {
  bool lemma4 = false;
  std::string n_list = "64,128,256,512,1024";
  std::uint64_t d = 0;
};

inline int cmd_divisibility(const ExperimentConfig& c, const Outputs& o, const DivisibilityArgs& a) {
  const auto ns = expand_grid(a.n_list, 0);
  if (a.lemma4) {
    const auto rep = lemma4_error_report(ns, c.threads);
    std::vector<Series> ss{{"sup |P - theta/d| / scale", {}, {}}};
    for (const auto& s : rep.summaries) {
      ss[0].x.push_back(static_cast<double>(s.n));
      ss[0].y.push_back(s.theta_uniform.fitted_constant);
    }
    ChartOptions opt;
    opt.title = "theta approximation error";
    o.emit("lemma4", to_json(rep), to_csv(rep), line_chart_svg(ss, opt));
    return kExitOk;
  }
  require(a.d >= 1, "divisibility: give --lemma4 or --d");
  ojson rows = ojson::array();
  std::ostringstream csv;
  csv << "n,d,residue,probability\n";
  for (auto n : ns) {
    const auto dist = binomial_mod_distribution(n, a.d);
    const auto th = theta(a.d, n);
    rows.push_back({{"n", n}, {"d", a.d}, {"probs", dist.probs}, {"P_divides", dist.probs[0]},
                    {"theta_direct_over_d", (th.direct / static_cast<double>(a.d)).real()}, {"theta_dual", th.dual}});
    for (std::size_t r = 0; r < dist.probs.size(); ++r)
      csv << n << ',' << a.d << ',' << r << ',' << fmt_num(dist.probs[r]) << '\n';
  }
  o.emit("divisibility", ojson{{"rows", rows}}, csv.str());
  return kExitOk;
}

inline int cmd_eta(const ExperimentConfig& c, const Outputs& o, double threshold) {
  const auto rep = eta_grid_estimate(c.N, c.rho, threshold, c.threads);
  o.emit("eta", to_json(rep), to_csv(rep));
  return kExitOk;
}

inline int cmd_second_moment(const ExperimentConfig& c, const Outputs& o, double C_eps) {
  const auto ns = expand_grid(c.n_grid, 60);
  const std::uint64_t top = *std::max_element(ns.begin(), ns.end());
  const auto primes = build_prime_table(std::max<std::uint64_t>(top, 2));
  const auto t = eval_additive(detail::spec_of(c), primes, top);
  ojson rows = ojson::array();
  std::ostringstream csv;
  csv << "n,oracle,pair_formula,bound,holds\n";
  bool all_hold = true;
  for (auto n : ns) {
    const auto s = second_moment_f_Sn(t, primes, n, {c.h, C_eps, 0.0});
    all_hold = all_hold && s.holds;
    rows.push_back(to_json(s));
    csv << n << ',' << fmt_num(s.oracle_value) << ',' << fmt_num(s.pair_formula_value) << ','
        << fmt_num(s.lemma_bound) << ',' << (s.holds ? 1 : 0) << '\n';
  }
  o.emit("second_moment", ojson{{"rows", rows}}, csv.str());
  return (c.gate && !all_hold) ? kExitGate : kExitOk;
}

inline int cmd_simulate(const ExperimentConfig& c, const Outputs& o) {
  const auto dist = parse_distribution(c.dist);
  const auto cps = expand_grid(c.checkpoints, c.N);
  const std::uint64_t top = *std::max_element(cps.begin(), cps.end());
  const auto primes = build_prime_table(std::max<std::uint64_t>(top, 2));
  std::optional<ArithmeticTables> t;
  if (detail::needs_tables(c)) t = detail::tables_of(c, primes, top);
  const auto w = detail::weights_of(c, primes, top, t ? &*t : nullptr);
  SimulationOptions opt;
  opt.threads = c.threads;
  opt.negative_control = c.negative_control;
  require(!c.seeds.empty(), "simulate: no seeds");
  std::vector<SimulationRun> runs;
  for (auto seed : c.seeds) runs.push_back(weighted_average_path(w, sample_iid(dist, seed), cps, opt));

  std::vector<Series> ss;
  for (const auto& r : runs) {
    Series s{"seed " + std::to_string(r.master_seed), {}, {}};
    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
      s.x.push_back(static_cast<double>(r.checkpoints[i]));
      s.y.push_back(r.deviation[i]);
    }
    ss.push_back(std::move(s));
  }
  ChartOptions copt;
  copt.title = "|M_n - E X|, " + dist.to_string() + ", " + w.name() + " weights";
  copt.y_label = "deviation";
  const auto svg = line_chart_svg(ss, copt);
  if (runs.size() == 1) {
    o.emit("simulate", to_json(runs[0]), to_csv(runs[0]), svg);
    return kExitOk;
  }
  const auto conv = convergence_report(runs);
  ojson doc;
  ojson arr = ojson::array();
  std::string csv = "seed,n,re,im,deviation\n";
  for (const auto& r : runs) {
    arr.push_back(to_json(r));
    std::istringstream lines(to_csv(r));
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) csv += std::to_string(r.master_seed) + "," + line + "\n";
  }
  doc["runs"] = arr;
  doc["convergence"] = to_json(conv);
  o.emit("simulate", doc, csv, svg);
  return kExitOk;
}

inline int cmd_decompose(const ExperimentConfig& c, const Outputs& o, std::uint64_t n) {
  const auto primes = build_prime_table(std::max<std::uint64_t>(n, 2));
  const auto t = eval_additive(detail::spec_of(c), primes, n);
  const auto dist = parse_distribution(c.dist);
  require(dist.integrable() || c.negative_control, "decompose: distribution has no mean");
  require(c.seeds.size() == 1, "decompose: give exactly one seed");
  const auto r = prime_decomposition_check(t, primes, SampleFn(sample_iid(dist, c.seeds[0])), n);
  auto j = to_json(r);
  j["dist"] = dist.to_string();
  j["seed"] = c.seeds[0];
  j["rng"] = kRngName;
  o.emit("decompose", j, std::nullopt);
  return kExitOk;
}

struct JopArgs {
  std::vector<double> x;
  std::string integral;
};

inline int cmd_jop(const ExperimentConfig& c, const Outputs& o, const JopArgs& a) {
  const auto primes = build_prime_table(std::max<std::uint64_t>(c.N, 2));
  std::optional<ArithmeticTables> t;
  if (detail::needs_tables(c)) t = detail::tables_of(c, primes, c.N);
  const auto w = detail::weights_of(c, primes, c.N, t ? &*t : nullptr);
  const JopCounter counter(w);
  ojson doc;
  doc["weights"] = w.name();
  doc["N"] = c.N;
  ojson counts = ojson::array();
  for (double x : a.x) {
    require(x >= 0, "jop: x must be nonnegative");
    counts.push_back({{"x", x}, {"count", counter.count(x)}});
  }
  doc["counts"] = counts;
  const auto t_grid = expand_grid(c.t_grid, c.N);
  std::ostringstream csv;
  csv << "t,N_t,N_t_over_t" << (t && c.weights == "additive" ? ",L_t,L_t_over_t" : "") << '\n';
  ojson prof = ojson::array();
  std::optional<CountProfile> L;
  if (t && c.weights == "additive") L = L_profile(*t, t_grid);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double td = static_cast<double>(t_grid[i]);
    const auto n = counter.count(td);
    ojson row = {{"t", t_grid[i]}, {"N", n}, {"N_over_t", static_cast<double>(n) / td}};
    csv << t_grid[i] << ',' << n << ',' << fmt_num(static_cast<double>(n) / td);
    if (L) {
      row["L"] = L->grid[i].lhs;
      row["L_over_t"] = L->grid[i].ratio;
      csv << ',' << fmt_num(L->grid[i].lhs) << ',' << fmt_num(L->grid[i].ratio);
    }
    csv << '\n';
    prof.push_back(row);
  }
  doc["profile"] = prof;
  if (L) doc["L_sup_ratio"] = L->sup_ratio;
  if (!a.integral.empty()) {
    const auto d = parse_distribution(a.integral);
    doc["integral"] = to_json(integral_criterion(w, d));
    doc["integral"]["dist"] = d.to_string();
  }
  o.emit("jop", doc, csv.str());
  return kExitOk;
}

inline int cmd_cache(const ExperimentConfig& c, const Outputs& o, const std::string& action, std::string path) {
  if (path.empty()) {
    const char* dir = std::getenv("ASLN_CACHE_DIR");
    require(dir && *dir, "cache: give --path or set ASLN_CACHE_DIR");
    path = detail::cache_path(dir, detail::spec_of(c).name(), c.N);
  }
  ArithmeticTables t;
  if (action == "save") {
    const auto primes = build_prime_table(std::max<std::uint64_t>(c.N, 2));
    t = eval_additive(detail::spec_of(c), primes, c.N);
    save_tables(path, t);
  } else if (action == "load") {
    t = load_tables(path);
  } else {
    throw PreconditionError("cache: action must be save or load");
  }
  o.emit("cache",
         ojson{{"action", action}, {"path", path}, {"version", kCacheVersion}, {"N", t.N},
               {"F_N", {t.F[t.N].real(), t.F[t.N].imag()}}, {"G_N", t.G[t.N]}, {"B_N", t.B[t.N]}},
         std::nullopt);
  return kExitOk;
}

// -----------------------------------------------------------------------------
// Entry point
// -----------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  std::string N_text = std::to_string(cfg.N), config_file, seeds_text;
  bool dump_config = false;

  CLI::App app{"Additive functions, divisibility of random walks and weighted strong laws"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads, "worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));
  app.add_flag("--gate", cfg.gate, "exit 3 when a verdict is 'fails'");
  app.add_option("--out", cfg.out_dir, "directory for output files");
  app.add_option("--format", cfg.formats, "output formats: json, csv, svg")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--config", config_file, "read the experiment config from a JSON file");
  app.add_flag("--dump-config", dump_config, "print the effective config as JSON and exit");

  auto spec_opts = [&](CLI::App* s) {
    s->add_option("--preset", cfg.preset, "omega, log_prime, complex_quadratic_phase, von_mangoldt_weights");
    s->add_option("--table", cfg.table_path, "CSV file with header prime,re,im and a prime=0 default row");
  };
  auto horizon_opt = [&](CLI::App* s) { s->add_option("-N,--horizon", N_text, "horizon N (1e6, 10^6 or 1000000)"); };

  auto* sieve = app.add_subcommand("sieve", "prefix sums F, G, S_A, B on a grid");
  spec_opts(sieve);
  horizon_opt(sieve);
  sieve->add_option("--n-grid", cfg.n_grid, "grid: dyadic, dyadic:a:b or a comma list");
  bool stream = false, erdos_kac = false;
  sieve->add_flag("--stream", stream, "segmented sieve, no in-memory tables");
  sieve->add_flag("--erdos-kac", erdos_kac, "KS distance of the standardised values to the normal law");

  auto* cond = app.add_subcommand("conditions", "finite-horizon checks of the SLLN conditions");
  spec_opts(cond);
  horizon_opt(cond);
  cond->add_option("--check", cfg.checks, "conditions to run (default: all)")->delimiter(',');
  cond->add_option("--weights", cfg.weights, "additive, unit, alternating, von_mangoldt");
  cond->add_option("--n-grid", cfg.n_grid, "n grid");
  cond->add_option("--t-grid", cfg.t_grid, "t grid");
  cond->add_option("--eps", cfg.eps, "Lindeberg eps list")->delimiter(',');
  cond->add_option("--h", cfg.h, "exponent h in (0, 1/4)");
  cond->add_option("--eta", cfg.eta, "eta in (0, 1/2]");
  cond->add_option("--H", cfg.H, "comparison function: log, one, loglog, sqrt, A");

  auto* div = app.add_subcommand("divisibility", "P{d | S_n} and the theta approximation");
  DivisibilityArgs dargs;
  div->add_flag("--lemma4", dargs.lemma4, "error report over 2 <= d <= n");
  div->add_option("--n", dargs.n_list, "n list");
  div->add_option("--d", dargs.d, "modulus for the residue distribution");

  auto* eta = app.add_subcommand("eta", "probability of staying above rho n");
  horizon_opt(eta);
  double threshold = 0.01;
  eta->add_option("--rho", cfg.rho, "rho list")->delimiter(',');
  eta->add_option("--threshold", threshold, "positivity threshold");

  auto* sm = app.add_subcommand("second-moment", "second moment of f(S_n)");
  spec_opts(sm);
  double C_eps = 2.0;
  sm->add_option("--n", cfg.n_grid, "n list (n <= 60)");
  sm->add_option("--h", cfg.h, "split exponent h");
  sm->add_option("--c-eps", C_eps, "constant in front of the square-root term");

  auto* sim = app.add_subcommand("simulate", "weighted averages of i.i.d. samples");
  spec_opts(sim);
  sim->add_option("--weights", cfg.weights, "additive, unit, alternating, von_mangoldt");
  sim->add_option("--dist", cfg.dist, "exp:1, const:c, pareto:a:xm, uniform:a:b, cauchy:loc:scale [:centered]");
  sim->add_option("--seed", seeds_text, "master seed(s), comma separated");
  sim->add_option("--checkpoints", cfg.checkpoints, "checkpoint grid");
  sim->add_flag("--negative-control", cfg.negative_control, "allow laws without a mean");

  auto* dec = app.add_subcommand("decompose", "rearrangement over prime progressions");
  spec_opts(dec);
  std::string dec_n = "100000";
  dec->add_option("-n", dec_n, "n <= 1e5");
  dec->add_option("--dist", cfg.dist, "sample law");
  dec->add_option("--seed", seeds_text, "master seed");

  auto* jop = app.add_subcommand("jop", "counting function N(x), L(t) and the integral criterion");
  spec_opts(jop);
  horizon_opt(jop);
  JopArgs jargs;
  jop->add_option("--weights", cfg.weights, "additive, unit, alternating, von_mangoldt");
  jop->add_option("--x", jargs.x, "points at which to evaluate N(x)")->delimiter(',');
  jop->add_option("--t-grid", cfg.t_grid, "t grid");
  jop->add_option("--integral", jargs.integral, "law of X for the integral criterion");

  auto* cache = app.add_subcommand("cache", "save or load binary tables");
  spec_opts(cache);
  horizon_opt(cache);
  std::string cache_action, cache_file;
  cache->add_option("action", cache_action, "save or load")->required()->check(CLI::IsMember({"save", "load"}));
  cache->add_option("--path", cache_file, "cache file (default under $ASLN_CACHE_DIR)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw FormatError("cannot read config '" + config_file + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = config_from_json(ss.str());
    }
    auto* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    const auto* horizon = chosen->get_option_no_throw("--horizon");
    if (config_file.empty() || (horizon && horizon->count() > 0)) cfg.N = parse_count(N_text);
    if (!seeds_text.empty()) {
      cfg.seeds.clear();
      for (auto s : expand_grid(seeds_text, 0)) cfg.seeds.push_back(s);
    }
    if (cfg.formats.empty()) cfg.formats = {cfg.subcommand == "divisibility" ? "csv" : "json"};
    if (dump_config) {
      out << config_to_json(cfg) << '\n';
      return kExitOk;
    }
    Outputs o{out, cfg.out_dir, cfg.formats};
    const auto& sub = cfg.subcommand;
    if (sub == "sieve") return cmd_sieve(cfg, o, stream, erdos_kac);
    if (sub == "conditions") return cmd_conditions(cfg, o);
    if (sub == "divisibility") return cmd_divisibility(cfg, o, dargs);
    if (sub == "eta") {
      if (eta->count("--horizon") == 0 && config_file.empty()) cfg.N = 10000;
      return cmd_eta(cfg, o, threshold);
    }
    if (sub == "second-moment") {
      if (sm->count("--n") == 0 && config_file.empty()) cfg.n_grid = "20,30,40,50,60";
      return cmd_second_moment(cfg, o, C_eps);
    }
    if (sub == "simulate") return cmd_simulate(cfg, o);
    if (sub == "decompose") return cmd_decompose(cfg, o, parse_count(dec_n));
    if (sub == "jop") return cmd_jop(cfg, o, jargs);
    if (sub == "cache") return cmd_cache(cfg, o, cache_action, cache_file);
    throw PreconditionError("unknown subcommand '" + sub + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
}

}  // namespace asln::cli
