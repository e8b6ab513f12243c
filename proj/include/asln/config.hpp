#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "asln/errors.hpp"
#include "asln/numeric.hpp"

namespace asln {

/// Everything an experiment run depends on. Grids are kept in their text form
/// ("dyadic:10:20", "64,128,256", "dyadic" for powers of two up to N) and
/// expanded with expand_grid.
struct ExperimentConfig {
  std::string subcommand;
  std::string preset = "omega";
  std::string table_path;  // overrides preset when set
  std::string weights = "additive";  // additive, unit, alternating, von_mangoldt
  std::uint64_t N = 1'000'000;
  std::string n_grid = "dyadic";
  std::string t_grid = "dyadic";
  std::vector<double> eps = {0.01, 0.05, 0.1, 0.5, 1.0};
  std::vector<double> rho = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
  double h = 0.2;
  double eta = 1.0 / 3.0;
  std::string H = "log";
  std::vector<std::string> checks;
  std::string dist = "exp:1";
  std::vector<std::uint64_t> seeds = {42};
  std::string checkpoints = "dyadic:10:20";
  bool negative_control = false;
  std::string out_dir;
  std::vector<std::string> formats;  // empty: the subcommand default
  unsigned threads = 1;
  bool gate = false;

  bool operator==(const ExperimentConfig&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ExperimentConfig, subcommand, preset, table_path, weights, N, n_grid,
                                                t_grid, eps, rho, h, eta, H, checks, dist, seeds, checkpoints,
                                                negative_control, out_dir, formats, threads, gate)

inline std::string config_to_json(const ExperimentConfig& c) { return nlohmann::json(c).dump(2); }

inline ExperimentConfig config_from_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text).get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
}

/// Accepts integers written as "1000000", "1e6" or "10^6".
inline std::uint64_t parse_count(const std::string& s) {
  auto fail = [&] { return PreconditionError("not a positive integer: '" + s + "'"); };
  if (s.empty()) throw fail();
  double v = 0;
  try {
    const auto caret = s.find('^');
    std::size_t used = 0;
    if (caret != std::string::npos) {
      const double b = std::stod(s.substr(0, caret), &used);
      if (used != caret) throw fail();
      const double e = std::stod(s.substr(caret + 1), &used);
      if (used != s.size() - caret - 1) throw fail();
      v = std::pow(b, e);
    } else {
      v = std::stod(s, &used);
      if (used != s.size()) throw fail();
    }
  } catch (const std::logic_error&) {
    throw fail();
  }
  if (!(v >= 0) || v != std::floor(v) || v > 1.8e19) throw fail();
  return static_cast<std::uint64_t>(v);
}

/// "dyadic" (2, 4, ... up to N, with N appended), "dyadic:a:b" (2^a .. 2^b)
/// or a comma-separated list.
inline std::vector<std::uint64_t> expand_grid(const std::string& spec, std::uint64_t N) {
  if (spec == "dyadic") return dyadic_up_to(N);
  if (spec.rfind("dyadic:", 0) == 0) {
    const auto rest = spec.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw PreconditionError("grid '" + spec + "': expected dyadic:lo:hi");
    const auto lo = parse_count(rest.substr(0, colon)), hi = parse_count(rest.substr(colon + 1));
    if (lo > hi || hi > 62) throw PreconditionError("grid '" + spec + "': need lo <= hi <= 62");
    return dyadic_grid(static_cast<unsigned>(lo), static_cast<unsigned>(hi));
  }
  std::vector<std::uint64_t> out;
  std::string cur;
  for (char ch : spec + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(parse_count(cur));
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (out.empty()) throw PreconditionError("grid '" + spec + "' is empty");
  return out;
}

}  // namespace asln
