#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "qinv/poly.hpp"

namespace qinv {

/// Normalized GCD (integer content 1, positive leading coefficient).
/// gcd(p, 0) = normalize(p); gcd(0, 0) = 0. The result is checked to divide
/// both inputs exactly.
Poly gcd_multi(const Poly& a, const Poly& b);

/// Upper bound for the total degree of gcd(a, b): degree of the gcd of the
/// restrictions to a seeded random line modulo a 61-bit prime. The bound is
/// rigorous whenever the line keeps both total degrees; nullopt otherwise.
std::optional<unsigned> gcd_degree_bound(const Poly& a, const Poly& b, std::uint64_t seed = 0);

/// Variable-by-variable sparse interpolation of gcd(a, b) modulo a prime,
/// with univariate images taken along random lines. The candidate is accepted
/// only if it divides both inputs exactly over Q and its degree meets the line
/// bound, which certifies it. nullopt when the random choices were unlucky.
std::optional<Poly> gcd_sparse(const Poly& a, const Poly& b, std::uint64_t seed = 0);

/// Running gcd of the restrictions of several polynomials to one seeded random
/// line modulo a 61-bit prime. Its degree bounds the total degree of the gcd
/// of every polynomial added, provided one of them kept its total degree on
/// the line; so degree 0 certifies that the exact gcd is 1.
class LineGcdBound {
 public:
  LineGcdBound(std::size_t num_vars, std::uint64_t seed = 0);
  void add(const Poly& p);
  /// nullopt until some input kept its degree on the line.
  std::optional<unsigned> degree() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Running GCD of a list, left to right, stopping once it reaches 1.
Poly gcd_all(std::span<const Poly> polys);

}  // namespace qinv
