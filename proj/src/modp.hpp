#pragma once

// Arithmetic modulo the Mersenne prime 2^61 - 1, univariate polynomials over
// that field, and a skew-matrix Pfaffian. Internal to the library.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qinv/poly.hpp"

namespace qinv::modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kP = (u64(1) << 61) - 1;

inline u64 reduce(u128 z) {
  u64 r = static_cast<u64>(z & kP) + static_cast<u64>(z >> 61);
  r = (r & kP) + (r >> 61);
  return r >= kP ? r - kP : r;
}
inline u64 mulm(u64 a, u64 b) { return reduce(static_cast<u128>(a) * b); }
inline u64 addm(u64 a, u64 b) {
  u64 r = a + b;
  return r >= kP ? r - kP : r;
}
inline u64 subm(u64 a, u64 b) { return a >= b ? a - b : a + kP - b; }
inline u64 negm(u64 a) { return a == 0 ? 0 : kP - a; }
inline u64 powm(u64 a, u64 e) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulm(r, a);
    a = mulm(a, a);
    e >>= 1;
  }
  return r;
}
inline u64 invm(u64 a) { return powm(a, kP - 2); }

/// nullopt when the denominator vanishes modulo kP.
inline std::optional<u64> to_mod(const Rational& c) {
  static const mpz_class p(std::to_string(kP));
  mpz_class n, d;
  mpz_fdiv_r(n.get_mpz_t(), c.get_num_mpz_t(), p.get_mpz_t());
  mpz_fdiv_r(d.get_mpz_t(), c.get_den_mpz_t(), p.get_mpz_t());
  if (d == 0) return std::nullopt;
  return mulm(static_cast<u64>(n.get_ui()), invm(static_cast<u64>(d.get_ui())));
}

inline u64 random_unit(std::mt19937_64& rng) { return 1 + rng() % (kP - 1); }

using UPoly = std::vector<u64>;  // index = degree

inline void trim(UPoly& u) {
  while (!u.empty() && u.back() == 0) u.pop_back();
}

/// Coefficients of the polynomial of degree <= nodes.size()-1 through (nodes, values).
inline UPoly interpolate(const std::vector<u64>& nodes, std::vector<u64> values) {
  const std::size_t n = nodes.size();
  // Divided differences in place.
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i)
      values[i] = mulm(subm(values[i], values[i - 1]), invm(subm(nodes[i], nodes[i - j])));
  UPoly out(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    // out = out * (x - nodes[i]) + values[i]
    for (std::size_t k = n - 1; k > 0; --k) out[k] = subm(out[k - 1], mulm(out[k], nodes[i]));
    out[0] = subm(values[i], mulm(out[0], nodes[i]));
  }
  return out;
}

inline UPoly monic_gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    u64 inv = invm(b.back());
    while (a.size() >= b.size()) {
      u64 f = mulm(a.back(), inv);
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = subm(a[i + shift], mulm(f, b[i]));
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  if (a.empty()) return a;
  u64 inv = invm(a.back());
  for (auto& c : a) c = mulm(c, inv);
  return a;
}

/// Pfaffian of a skew n x n matrix (row-major, destroyed) by skew elimination.
inline u64 pfaffian(std::vector<u64>& a, std::size_t n) {
  if (n % 2) return 0;
  auto at = [&](std::size_t i, std::size_t j) -> u64& { return a[i * n + j]; };
  u64 pf = 1;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    std::size_t piv = k + 1;
    while (piv < n && at(k, piv) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k + 1, j), at(piv, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(at(i, k + 1), at(i, piv));
      pf = negm(pf);
    }
    const u64 p = at(k, k + 1);
    pf = mulm(pf, p);
    const u64 inv = invm(p);
    // Clear row and column k beyond k+1 using column k+1, then row and
    // column k+1 using column k; both are congruences with determinant 1.
    for (std::size_t j = k + 2; j < n; ++j) {
      const u64 f = mulm(at(k, j), inv);
      if (f == 0) continue;
      for (std::size_t i = k; i < n; ++i) at(i, j) = subm(at(i, j), mulm(f, at(i, k + 1)));
      for (std::size_t i = k; i < n; ++i) at(j, i) = subm(at(j, i), mulm(f, at(k + 1, i)));
    }
    for (std::size_t j = k + 2; j < n; ++j) {
      const u64 f = mulm(at(k + 1, j), negm(inv));
      if (f == 0) continue;
      for (std::size_t i = k; i < n; ++i) at(i, j) = subm(at(i, j), mulm(f, at(i, k)));
      for (std::size_t i = k; i < n; ++i) at(j, i) = subm(at(j, i), mulm(f, at(k, i)));
    }
  }
  return pf;
}

}  // namespace qinv::modp
