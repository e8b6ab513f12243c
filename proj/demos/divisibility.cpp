// P{d | S_n} for a simple random walk next to the theta approximation.
#include <cstdio>

#include "asln.hpp"

int main() {
  const std::uint64_t n = 200;
  std::printf("%4s %14s %14s %10s\n", "d", "exact", "theta/d", "error");
  for (std::uint64_t d : {2u, 3u, 5u, 10u, 20u, 50u, 100u, 200u}) {
    const double exact = asln::prob_divides(n, d);
    const double approx = asln::theta(d, n).dual;
    std::printf("%4llu %14.10f %14.10f %10.2e\n", static_cast<unsigned long long>(d), exact, approx, exact - approx);
  }
}
