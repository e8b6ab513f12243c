// Weighted averages of Exp(1) samples with omega weights, printed at dyadic checkpoints.
#include <cstdio>

#include "asln.hpp"

int main() {
  const std::uint64_t n = 1 << 18;
  const auto primes = asln::build_prime_table(n);
  const auto tables = asln::eval_additive(asln::AdditiveFunctionSpec::preset(asln::Preset::omega), primes, n);
  const auto weights = asln::WeightSequence::from_tables(tables);
  const auto run = asln::weighted_average_path(weights, asln::sample_iid(asln::DistributionSpec::exponential(1), 7),
                                               asln::dyadic_grid(8, 18), {});
  std::printf("%10s %12s %12s\n", "n", "M_n", "|M_n - 1|");
  for (std::size_t i = 0; i < run.checkpoints.size(); ++i)
    std::printf("%10llu %12.6f %12.3e\n", static_cast<unsigned long long>(run.checkpoints[i]), run.M[i].real(),
                run.deviation[i]);
}
