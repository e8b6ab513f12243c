#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "asln/errors.hpp"
#include "asln/tables.hpp"

// Binary cache layout (all little-endian):
//   "ASLN" | u32 version | u64 N | f[N] (re,im) | F[N] (re,im) | G[N] | S_A[N] (re,im) | B[N]
// Arrays cover n = 1..N.

namespace asln {

inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr char kCacheMagic[4] = {'A', 'S', 'L', 'N'};

namespace detail {

template <typename U>
void put_le(std::string& buf, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

inline void put_f64(std::string& buf, double x) { put_le(buf, std::bit_cast<std::uint64_t>(x)); }
inline double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_le<std::uint64_t>(p)); }

}  // namespace detail

inline std::string encode_tables(const ArithmeticTables& t) {
  std::string buf;
  buf.reserve(16 + t.N * 64);
  buf.append(kCacheMagic, 4);
  detail::put_le<std::uint32_t>(buf, kCacheVersion);
  detail::put_le<std::uint64_t>(buf, t.N);
  auto put_c = [&](const std::vector<cplx>& v) {
    for (std::uint64_t n = 1; n <= t.N; ++n) {
      detail::put_f64(buf, v[n].real());
      detail::put_f64(buf, v[n].imag());
    }
  };
  auto put_r = [&](const std::vector<double>& v) {
    for (std::uint64_t n = 1; n <= t.N; ++n) detail::put_f64(buf, v[n]);
  };
  put_c(t.f);
  put_c(t.F);
  put_r(t.G);
  put_c(t.S_A);
  put_r(t.B);
  return buf;
}

/// Re-derives the table invariants on a deterministic ~1% sample of indices.
inline void verify_sampled_invariants(const ArithmeticTables& t) {
  auto close = [](cplx a, cplx b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(1.0, scale); };
  if (t.N >= 1 && t.f[1] != cplx{}) throw FormatError("cache: f(1) must be 0");
  const std::uint64_t stride = 100;
  for (std::uint64_t n = 2; n <= t.N; n += stride) {
    if (!close(t.F[n] - t.F[n - 1], t.f[n], std::abs(t.F[n])))
      throw FormatError("cache: F increments disagree with f at n=" + std::to_string(n));
    if (!close(t.G[n] - t.G[n - 1], std::norm(t.f[n]), t.G[n]))
      throw FormatError("cache: G increments disagree with |f|^2 at n=" + std::to_string(n));
    if (t.B[n] < t.B[n - 1] || t.G[n] < t.G[n - 1])
      throw FormatError("cache: B or G decreases at n=" + std::to_string(n));
  }
}

inline ArithmeticTables decode_tables(const std::string& buf) {
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (buf.size() < 16 || std::memcmp(p, kCacheMagic, 4) != 0)
    throw FormatError("cache: bad magic, expected \"ASLN\"");
  const auto version = detail::get_le<std::uint32_t>(p + 4);
  if (version != kCacheVersion)
    throw FormatError("cache: unsupported version " + std::to_string(version) + ", expected \"ASLN\" version " +
                      std::to_string(kCacheVersion));
  const auto N = detail::get_le<std::uint64_t>(p + 8);
  if (N == 0 || N > kMaxHorizon) throw FormatError("cache: implausible horizon " + std::to_string(N));
  const std::uint64_t expected = 16 + N * 8 * (2 + 2 + 1 + 2 + 1);
  if (buf.size() != expected)
    throw FormatError("cache: truncated or oversized file (" + std::to_string(buf.size()) + " bytes, expected " +
                      std::to_string(expected) + ")");
  ArithmeticTables t;
  t.N = N;
  const unsigned char* q = p + 16;
  auto get_c = [&](std::vector<cplx>& v) {
    v.assign(N + 1, 0.0);
    for (std::uint64_t n = 1; n <= N; ++n, q += 16) v[n] = {detail::get_f64(q), detail::get_f64(q + 8)};
  };
  auto get_r = [&](std::vector<double>& v) {
    v.assign(N + 1, 0.0);
    for (std::uint64_t n = 1; n <= N; ++n, q += 8) v[n] = detail::get_f64(q);
  };
  get_c(t.f);
  get_c(t.F);
  get_r(t.G);
  get_c(t.S_A);
  get_r(t.B);
  t.real_valued = true;
  t.nonnegative = true;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (t.f[n].imag() != 0) t.real_valued = false;
    if (t.f[n].real() < 0) t.nonnegative = false;
  }
  t.nonnegative = t.nonnegative && t.real_valued;
  t.spec_name = "cached";
  verify_sampled_invariants(t);
  return t;
}

inline void save_tables(const std::string& path, const ArithmeticTables& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cache: cannot write '" + path + "'");
  const std::string buf = encode_tables(t);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError("cache: write failed for '" + path + "'");
}

inline ArithmeticTables load_tables(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cache: cannot read '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_tables(buf);
}

}  // namespace asln
