#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace qinv {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in canonical form (the two-argument mpq_class constructor does not reduce).
inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a configurable resource cap would be exceeded.
class CapExceeded : public Error {
 public:
  CapExceeded(std::string cap, std::size_t limit, std::size_t requested);
  const std::string& cap() const { return cap_; }
  std::size_t limit() const { return limit_; }
  std::size_t requested() const { return requested_; }

 private:
  std::string cap_;
  std::size_t limit_;
  std::size_t requested_;
};

/// Indexed variable set. Variables [0, num_g) are coordinates on g,
/// [num_g, num_g + num_v) coordinates on V. Printed names are `g<i>` and
/// `v<j>`, 1-based within each part.
class Context {
 public:
  Context(std::size_t num_g, std::size_t num_v) : num_g_(num_g), num_v_(num_v) {}

  std::size_t size() const { return num_g_ + num_v_; }
  std::size_t num_g() const { return num_g_; }
  std::size_t num_v() const { return num_v_; }
  bool is_g(std::size_t var) const { return var < num_g_; }

  std::string name(std::size_t var) const;
  /// Inverse of name(); nullopt for unknown names.
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const Context& other) const = default;

 private:
  std::size_t num_g_;
  std::size_t num_v_;
};

using ContextPtr = std::shared_ptr<const Context>;

inline ContextPtr make_context(std::size_t num_g, std::size_t num_v) {
  return std::make_shared<const Context>(num_g, num_v);
}

bool same_context(const ContextPtr& a, const ContextPtr& b);

struct Factor {
  std::uint16_t var;
  std::uint16_t exp;
  bool operator==(const Factor&) const = default;
};

/// Power product stored sparsely: factors sorted by variable, no zero exponents.
class Monomial {
 public:
  using Storage = boost::container::small_vector<Factor, 6>;

  Monomial() = default;
  static Monomial variable(std::size_t var, unsigned exp = 1);
  /// From a dense exponent vector.
  static Monomial from_exponents(std::span<const unsigned> exps);

  unsigned degree() const { return degree_; }
  unsigned exponent(std::size_t var) const;
  bool is_one() const { return factors_.empty(); }
  const Storage& factors() const { return factors_; }

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  /// this / other when other divides this.
  std::optional<Monomial> divide(const Monomial& other) const;
  /// Componentwise minimum.
  Monomial gcd(const Monomial& other) const;
  /// Exponent of `var` lowered by one (precondition: exponent >= 1).
  Monomial lowered(std::size_t var) const;
  /// Replaces factor `var` by nothing (exponent 0).
  Monomial without(std::size_t var) const;

  std::size_t hash() const;
  bool operator==(const Monomial& other) const {
    return degree_ == other.degree_ && factors_ == other.factors_;
  }

  /// Appends a factor with a variable larger than all present ones.
  void push_back_unchecked(Factor f) {
    factors_.push_back(f);
    degree_ += f.exp;
  }

 private:
  Storage factors_;
  unsigned degree_ = 0;
};

/// Graded reverse lexicographic comparison: >0 when a > b.
int grevlex_compare(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial mono;
  Rational coeff;
};

struct Bidegree {
  unsigned g = 0;
  unsigned v = 0;
  unsigned total() const { return g + v; }
  bool operator==(const Bidegree&) const = default;
};

/// Sparse multivariate polynomial with rational coefficients. Terms are kept
/// strictly descending in grevlex order with no zero coefficients.
class Poly {
 public:
  explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static Poly constant(ContextPtr ctx, const Rational& c);
  static Poly variable(ContextPtr ctx, std::size_t var);
  static Poly monomial(ContextPtr ctx, Monomial m, const Rational& c = 1);
  /// Arbitrary term list: sorted, merged, zeros dropped.
  static Poly from_terms(ContextPtr ctx, std::vector<Term> terms);
  /// Term list already strictly descending with nonzero coefficients.
  static Poly from_sorted_terms(ContextPtr ctx, std::vector<Term> terms);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  /// Constant coefficient (0 for the zero polynomial).
  Rational constant_value() const;
  const Term& leading() const { return terms_.front(); }

  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;
  bool is_homogeneous() const;
  /// Sorted list of variables occurring in the polynomial.
  std::vector<std::size_t> variables() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Poly& other);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& c, const Poly& p);
  friend Poly operator*(const Poly& p, const Rational& c) { return c * p; }

  bool operator==(const Poly& other) const;

 private:
  ContextPtr ctx_;
  std::vector<Term> terms_;
};

enum class ArithOp { add, sub, mul, pow };

/// Binary arithmetic entry point; for `pow` the exponent is `exponent`.
Poly arith(const Poly& a, const Poly& b, ArithOp op, unsigned exponent = 0);
Poly pow(const Poly& p, unsigned exponent);
Poly mul_monomial(const Poly& p, const Monomial& m, const Rational& c);

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
/// Exact quotient; throws when the division is not exact.
Poly divide_or_throw(const Poly& a, const Poly& b);

Poly partial_derivative(const Poly& p, std::size_t var);
Rational evaluate(const Poly& p, std::span<const Rational> point);
/// Substitutes constants for a subset of variables.
Poly partial_evaluate(const Poly& p, std::span<const std::pair<std::size_t, Rational>> values);
/// Substitutes polynomials for variables (all substitutions simultaneous).
Poly substitute(const Poly& p, std::span<const std::pair<std::size_t, Poly>> values);

/// (deg_g, deg_V) when every term shares both degrees.
std::optional<Bidegree> bidegree(const Poly& p);

/// Integer content 1 and positive leading coefficient. Zero maps to zero.
Poly normalize(const Poly& p);
/// c with p = c * q and q having integer coprime coefficients, positive leading coefficient.
Rational rational_content(const Poly& p);

std::string to_string(const Poly& p);
/// Parses the text produced by to_string (whitespace tolerant).
Poly parse_poly(const ContextPtr& ctx, std::string_view text);

std::string to_string(const Rational& r);

}  // namespace qinv
