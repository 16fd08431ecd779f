#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qinv/invariants.hpp"
#include "qinv/liealg.hpp"
#include "qinv/packed.hpp"

namespace qinv {

struct InvarianceVerdict {
  bool invariant = false;
  /// Basis indices whose Lie derivative is nonzero.
  std::vector<std::size_t> failing;
};

/// lie_derivative(q, i, F) == 0 for every basis index i.
InvarianceVerdict check_invariance(const LieAlgebraData& q, const Poly& f);
/// Same test on a packed polynomial (exact integer arithmetic).
InvarianceVerdict check_invariance(const LieAlgebraData& q, const PackedPoly& f);
/// Only the derivations by V-basis elements.
InvarianceVerdict check_V_derivations(const LieAlgebraData& q, const Poly& f);

/// V-coordinates of E_m + E_k: covector copy a is e_a, vector copy b is e_b.
std::vector<Rational> default_generic_point(const LieAlgebraData& q);

/// Matrix of x -> ad*(xi_t) x on the V-basis: row s, column t (g-basis).
/// Its kernel is g_x and its row space is Ann(g_x) = ad*(V) x.
RationalMatrix stabilizer_matrix(const LieAlgebraData& q, const std::vector<Rational>& x);

struct GenericVInvariance {
  bool invariant = false;
  std::size_t annihilator_dim = 0;
  std::size_t expected_dim = 0;
  /// Indices (into the annihilator basis) of directions that change F.
  std::vector<std::size_t> failing;
};

/// F(xi + t a, x) == F(xi, x) as polynomials in (xi, t) for each a in a basis
/// of ad*(V) x. Throws Error when dim ad*(V) x is below dim g - dim g_x.
GenericVInvariance check_V_invariance_generic(const LieAlgebraData& q, const Poly& f,
                                              const std::optional<std::vector<Rational>>& x = std::nullopt);

/// Indices of the g-basis elements spanning g_x; throws Error when g_x is not
/// spanned by basis elements.
std::vector<std::size_t> stabilizer_coordinates(const LieAlgebraData& q, const std::vector<Rational>& x);

/// F restricted to g + x, in the coordinates of g_x. Throws Error when the
/// restriction involves other coordinates.
Poly restriction_phi_x(const LieAlgebraData& q, const Poly& f,
                       const std::optional<std::vector<Rational>>& x = std::nullopt);
/// Packed variant for x with 0/1 coordinates (returns the restriction as Poly).
Poly restriction_phi_x(const LieAlgebraData& q, const PackedPoly& f,
                       const std::optional<std::vector<Rational>>& x = std::nullopt);

/// Max rank of the Jacobian of fs over `trials` seeded random points.
std::size_t jacobian_rank(const std::vector<Poly>& fs, std::uint64_t seed = 0, int trials = kDefaultTrials);

struct PolynomialityLedger {
  SemidirectSpec spec;
  std::size_t generators = 0;
  int index = 0;
  bool all_invariant = false;
  std::size_t jacobian_rank = 0;
  unsigned degree_sum = 0;
  unsigned v_degree_sum = 0;
  Rational b_q;
  int dim_v = 0;
  unsigned p_degree = 0;
  bool p_is_one = false;
  /// Σ deg + deg p == b(q).
  bool degree_relation = false;
  std::string verdict;  // "certified free" or "not certified"
  std::vector<std::string> reasons;
  std::uint64_t seed = 0;

  nlohmann::ordered_json to_json() const;
};

/// Degree-sum certificate for a candidate generator set. `p` is the
/// fundamental semi-invariant; computed when omitted.
PolynomialityLedger polynomiality_certificate(const LieAlgebraData& q, const std::vector<InvariantCandidate>& fs,
                                              const std::optional<Poly>& p = std::nullopt, std::uint64_t seed = 0);

struct DivisibilityVerdict {
  bool not_divisible = true;
  std::size_t products_tried = 0;
  /// Exponent vector of the product that divides F, if any.
  std::optional<std::vector<unsigned>> divisor;
};

inline constexpr std::size_t kDefaultProductCap = 10000;

/// Trial division of F by every product of the generators whose V-degree is at
/// most the V-degree of F.
DivisibilityVerdict divisibility_check(const Poly& f, const std::vector<Poly>& v_invariants,
                                       std::size_t product_cap = kDefaultProductCap);

struct CheckRecord {
  std::string name;
  bool passed = false;
  /// True when the check asserts a predicted failure (pass = property fails).
  bool expected_failure = false;
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();
};

inline constexpr int kReportSchemaVersion = 1;

struct VerificationReport {
  SemidirectSpec spec;
  std::uint64_t seed = 0;
  nlohmann::ordered_json caps = nlohmann::ordered_json::object();
  std::vector<CheckRecord> checks;
  /// Selected checks that could not run, with the reason.
  std::vector<std::pair<std::string, std::string>> skipped;

  bool all_passed() const;
  /// Checks sorted by name; schema version, seed and caps embedded.
  nlohmann::ordered_json to_json() const;
};

}  // namespace qinv
