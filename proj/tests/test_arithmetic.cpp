#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <numeric>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "asln.hpp"
#include "oracles.hpp"

using namespace asln;

namespace {

const PrimeTable& primes_1e5() {
  static const PrimeTable t = build_prime_table(100000);
  return t;
}

ArithmeticTables tables_for(Preset p, std::uint64_t N) {
  return eval_additive(AdditiveFunctionSpec::preset(p), primes_1e5(), N);
}

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(PrimeTable, SmallHorizons) {
  EXPECT_EQ(build_prime_table(10).primes, (std::vector<std::uint32_t>{2, 3, 5, 7}));
  EXPECT_EQ(build_prime_table(2).primes, (std::vector<std::uint32_t>{2}));
}

TEST(PrimeTable, CountToMillionMatchesEratosthenes) {
  const auto t = build_prime_table(1000000);
  const auto ref = oracle::primes_up_to(1000000);
  ASSERT_EQ(ref.size(), 78498u);
  ASSERT_EQ(t.primes.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_EQ(t.primes[i], ref[i]);
  EXPECT_EQ(t.pi(1000000), 78498u);
}

TEST(PrimeTable, SmallestFactorByTrialDivision) {
  const auto& t = primes_1e5();
  for (std::uint64_t n = 2; n <= 20000; ++n) {
    ASSERT_EQ(t.smallest_prime_factor(n), oracle::prime_factors(n).front()) << n;
    ASSERT_EQ(t.is_prime(n), oracle::is_prime(n)) << n;
  }
}

TEST(PrimeTable, RejectsBadHorizons) {
  EXPECT_THROW(build_prime_table(1), PreconditionError);
  EXPECT_THROW(build_prime_table(kMaxHorizon + 1), CapacityError);
}

TEST(PrimeTable, MillerRabinAgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 5000; ++n) ASSERT_EQ(is_prime_u64(n), oracle::is_prime(n)) << n;
  EXPECT_TRUE(is_prime_u64(1000000007ull));
  EXPECT_FALSE(is_prime_u64(1000000007ull * 3));
}

TEST(EvalAdditive, OmegaByHand) {
  const auto t = tables_for(Preset::omega, 10);
  const std::vector<double> expect{0, 1, 1, 1, 1, 2, 1, 1, 1, 2};
  for (std::uint64_t n = 1; n <= 10; ++n) EXPECT_EQ(t.f[n], cplx(expect[n - 1])) << n;
  EXPECT_EQ(t.F[10], cplx(11));
  EXPECT_EQ(t.G[10], 15.0);
  EXPECT_EQ(t.f[1], cplx(0));
}

TEST(EvalAdditive, ComplexPhaseAtFifteen) {
  const auto t = tables_for(Preset::complex_quadratic_phase, 20);
  EXPECT_EQ(t.f[15], cplx(2, 0));
  EXPECT_EQ(t.f[2], cplx(1, 0));
  EXPECT_EQ(t.f[3], cplx(1, -1));
  EXPECT_FALSE(t.real_valued);
}

TEST(EvalAdditive, RejectsNonAdditive) {
  EXPECT_THROW(eval_additive(AdditiveFunctionSpec::preset(Preset::von_mangoldt_weights), primes_1e5(), 100),
               PreconditionError);
  EXPECT_THROW(stream_prefix_stats(AdditiveFunctionSpec::preset(Preset::von_mangoldt_weights), {100}),
               PreconditionError);
}

TEST(EvalAdditive, MatchesTrialDivisionOracle) {
  for (Preset p : {Preset::omega, Preset::log_prime, Preset::complex_quadratic_phase}) {
    const auto spec = AdditiveFunctionSpec::preset(p);
    const auto t = eval_additive(spec, primes_1e5(), 5000);
    for (std::uint64_t n = 1; n <= 5000; ++n) {
      const auto ref = oracle::additive_value(n, [&](std::uint64_t q) { return spec.at_prime(q); });
      ASSERT_LE(std::abs(t.f[n] - ref), 1e-12) << preset_name(p) << " n=" << n;
    }
  }
}

TEST(EvalAdditive, TableInvariants) {
  for (Preset p : {Preset::omega, Preset::log_prime, Preset::complex_quadratic_phase}) {
    const auto t = tables_for(p, 100000);
    EXPECT_EQ(t.f[1], cplx(0));
    const auto& pr = primes_1e5();
    for (std::uint64_t n = 2; n <= t.N; ++n) {
      ASSERT_LE(std::abs(t.F[n] - t.F[n - 1] - t.f[n]), 1e-9 * std::max(1.0, std::abs(t.F[n])));
      ASSERT_LE(std::abs(t.G[n] - t.G[n - 1] - std::norm(t.f[n])), 1e-9 * std::max(1.0, t.G[n]));
      ASSERT_GE(t.B[n], t.B[n - 1]);
      ASSERT_GE(t.G[n], t.G[n - 1]);
      if (!pr.is_prime(n)) {
        ASSERT_EQ(t.S_A[n], t.S_A[n - 1]) << n;
        ASSERT_EQ(t.B[n], t.B[n - 1]) << n;
      }
    }
  }
}

TEST(EvalAdditive, StrongAdditivity) {
  const auto t = tables_for(Preset::log_prime, 100000);
  for (auto p : primes_1e5().primes) {
    for (std::uint64_t q = std::uint64_t{p} * p; q <= t.N; q *= p) ASSERT_EQ(t.f[q], t.f[p]) << q;
  }
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint64_t> pick(1, 316);
  int tested = 0;
  while (tested < 1000) {
    const auto m = pick(rng), n = pick(rng);
    if (std::gcd(m, n) != 1) continue;
    ASSERT_LE(std::abs(t.f[m * n] - (t.f[m] + t.f[n])), 1e-12) << m << "*" << n;
    ++tested;
  }
}

TEST(PrimeExpansionIdentities, ByHand) {
  const auto t = tables_for(Preset::omega, 100);
  const auto& pr = primes_1e5();
  EXPECT_EQ(F_via_primes(t, pr, 10), cplx(11));
  EXPECT_EQ(G_via_primes(t, pr, 10), 15.0);
  EXPECT_EQ(F_via_primes(t, pr, 1), cplx(0));
  EXPECT_EQ(G_via_primes(t, pr, 1), 0.0);
  EXPECT_EQ(F_via_primes(t, pr, 100), t.F[100]);
  EXPECT_EQ(G_via_primes(t, pr, 100), t.G[100]);
}

TEST(PrimeExpansionIdentities, ComplexPhaseAt200) {
  const auto t = tables_for(Preset::complex_quadratic_phase, 200);
  EXPECT_LE(rel_err(F_via_primes(t, primes_1e5(), 200), t.F[200]), 1e-9);
  EXPECT_LE(std::abs(G_via_primes(t, primes_1e5(), 200) - t.G[200]) / t.G[200], 1e-9);
}

TEST(PrimeExpansionIdentities, BlockedFormAgreesWithDirectLoops) {
  for (Preset p : {Preset::omega, Preset::log_prime, Preset::complex_quadratic_phase}) {
    const auto t = tables_for(p, 3000);
    const PrimeExpansion ex(t, primes_1e5());
    for (std::uint64_t n = 1; n <= 3000; ++n) {
      ASSERT_LE(rel_err(ex.F(n), F_via_primes(t, primes_1e5(), n)), 1e-12) << n;
      ASSERT_LE(std::abs(ex.G(n) - G_via_primes(t, primes_1e5(), n)) / std::max(1.0, t.G[n]), 1e-12) << n;
      if (p == Preset::omega) {
        ASSERT_EQ(ex.F(n), t.F[n]);
        ASSERT_EQ(ex.G(n), t.G[n]);
      }
    }
  }
}

TEST(Sandwich, HoldsForNonnegativePresets) {
  for (Preset p : {Preset::omega, Preset::log_prime}) {
    const auto t = tables_for(p, 100000);
    for (std::uint64_t n = 1; n <= t.N; ++n) ASSERT_TRUE(sandwich_at(t, n).ok()) << preset_name(p) << " n=" << n;
  }
  EXPECT_THROW(sandwich_at(tables_for(Preset::complex_quadratic_phase, 10), 5), PreconditionError);
}

TEST(Streaming, MatchesInMemoryTables) {
  for (Preset p : {Preset::omega, Preset::complex_quadratic_phase}) {
    const auto t = tables_for(p, 50000);
    const std::vector<std::uint64_t> cps{1, 2, 97, 1000, 4096, 31623, 50000};
    const auto rows = stream_prefix_stats(AdditiveFunctionSpec::preset(p), cps, 1000);
    ASSERT_EQ(rows.size(), cps.size());
    for (const auto& r : rows) {
      EXPECT_LE(rel_err(r.F, t.F[r.n]), 1e-12) << r.n;
      EXPECT_LE(std::abs(r.G - t.G[r.n]) / std::max(1.0, t.G[r.n]), 1e-12) << r.n;
      EXPECT_LE(rel_err(r.S_A, t.S_A[r.n]), 1e-12) << r.n;
      EXPECT_LE(std::abs(r.B - t.B[r.n]), 1e-12 * std::max(1.0, t.B[r.n])) << r.n;
    }
  }
}

TEST(ErdosKac, RejectsDegenerateAndComplex) {
  const auto zero = eval_additive(AdditiveFunctionSpec::table({}, 0.0), primes_1e5(), 1000);
  EXPECT_THROW(erdos_kac_empirical(zero, 1000), DegenerateError);
  EXPECT_THROW(erdos_kac_empirical(tables_for(Preset::complex_quadratic_phase, 100), 100), PreconditionError);
}

TEST(ErdosKac, KsAgreesWithDirectScan) {
  const auto t = tables_for(Preset::omega, 10000);
  const auto r = erdos_kac_empirical(t, 10000);
  // Direct scan of sup |F_n(x) - Phi(x)| over both one-sided limits at each value of omega.
  double best = 0;
  for (int k = 0; k <= 8; ++k) {
    std::uint64_t below = 0, at = 0;
    for (std::uint64_t n = 1; n <= 10000; ++n) {
      below += t.f[n].real() < k;
      at += t.f[n].real() <= k;
    }
    const double phi = normal_cdf((k - r.A) / std::sqrt(r.B));
    best = std::max({best, std::abs(phi - below / 1e4), std::abs(at / 1e4 - phi)});
  }
  EXPECT_NEAR(r.ks_distance, best, 1e-15);
  for (std::size_t i = 1; i < r.ecdf.size(); ++i) ASSERT_GE(r.ecdf[i], r.ecdf[i - 1]);
}

TEST(TableSpec, ParsesCsv) {
  std::istringstream in("prime,re,im\n2,1.5,0\n3,0,-1\n0,0.25,0\n");
  const auto spec = parse_table_csv(in);
  EXPECT_EQ(spec.at_prime(2), cplx(1.5, 0));
  EXPECT_EQ(spec.at_prime(3), cplx(0, -1));
  EXPECT_EQ(spec.at_prime(101), cplx(0.25, 0));
  EXPECT_FALSE(spec.real_valued());
}

TEST(TableSpec, RejectsBadInput) {
  std::istringstream no_default("prime,re,im\n2,1,0\n");
  EXPECT_THROW(parse_table_csv(no_default), FormatError);
  std::istringstream header("p,re,im\n0,1,0\n");
  EXPECT_THROW(parse_table_csv(header), FormatError);
  std::istringstream composite("prime,re,im\n4,1,0\n0,0,0\n");
  EXPECT_THROW(parse_table_csv(composite), PreconditionError);
  EXPECT_THROW(load_table_csv("/nonexistent/table.csv"), FormatError);
}

class CacheTest : public ::testing::Test {
 protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "asln_cache_test";
  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }
};

TEST_F(CacheTest, RoundTripIsBitIdentical) {
  const auto t = tables_for(Preset::omega, 100000);
  const auto path = (dir / "omega.asln").string();
  save_tables(path, t);
  const auto u = load_tables(path);
  ASSERT_EQ(u.N, t.N);
  EXPECT_EQ(encode_tables(u), encode_tables(t));
  EXPECT_EQ(std::memcmp(u.G.data(), t.G.data(), sizeof(double) * (t.N + 1)), 0);
  EXPECT_TRUE(u.nonnegative);
}

TEST_F(CacheTest, RejectsTruncatedFile) {
  auto buf = encode_tables(tables_for(Preset::omega, 1000));
  buf.resize(buf.size() - 8);
  EXPECT_THROW(decode_tables(buf), FormatError);
}

TEST_F(CacheTest, RejectsNewerVersionWithMessage) {
  auto buf = encode_tables(tables_for(Preset::omega, 1000));
  buf[4] = static_cast<char>(kCacheVersion + 1);
  try {
    decode_tables(buf);
    FAIL() << "accepted a newer version";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("expected \"ASLN\" version 1"), std::string::npos) << e.what();
  }
}

TEST_F(CacheTest, RejectsBadMagicAndCorruptData) {
  auto buf = encode_tables(tables_for(Preset::omega, 1000));
  auto bad = buf;
  bad[0] = 'X';
  EXPECT_THROW(decode_tables(bad), FormatError);
  // Overwrite F(2) so the sampled increment check at n = 2 fails.
  auto corrupt = buf;
  const std::size_t offset = 16 + 1000 * 16 + 1 * 16;
  const double junk = 123.0;
  std::memcpy(corrupt.data() + offset, &junk, sizeof junk);
  EXPECT_THROW(decode_tables(corrupt), FormatError);
}
