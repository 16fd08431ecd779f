#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qinv/linalg.hpp"
#include "qinv/poly.hpp"

namespace qinv {

/// Rectangular matrix of polynomials sharing one context (row-major).
class PolyMatrix {
 public:
  PolyMatrix(ContextPtr ctx, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const ContextPtr& context() const { return ctx_; }

  Poly& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Poly& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  /// Checked write; rejects entries from another context.
  void set(std::size_t i, std::size_t j, Poly p);

  PolyMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  PolyMatrix principal_minor(std::span<const std::size_t> idx) const { return submatrix(idx, idx); }
  PolyMatrix transpose() const;
  bool is_skew() const;
  RationalMatrix evaluate(std::span<const Rational> point) const;

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);

 private:
  ContextPtr ctx_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Poly> data_;
};

/// Size up to which det() uses cofactor expansion.
inline constexpr std::size_t kCofactorThreshold = 8;
/// Size up to which pfaffian() uses matching expansion.
inline constexpr std::size_t kMatchingThreshold = 12;
/// Hard cap on Pfaffian size (elimination path).
inline constexpr std::size_t kPfaffianCap = 64;

Poly det(const PolyMatrix& m);
/// Laplace expansion, memoized over column subsets (size <= 24).
Poly det_cofactor(const PolyMatrix& m);
/// Fraction-free Bareiss elimination.
Poly det_bareiss(const PolyMatrix& m);

/// Pfaffian with pf([[0,a],[-a,0]]) = a. Matching expansion up to
/// kMatchingThreshold; above it the grouped expansion when a zero principal
/// block of size >= 2 keeps the subset count under kZeroBlockSubsetCap,
/// otherwise elimination.
Poly pfaffian(const PolyMatrix& m);
/// Perfect-matching expansion, memoized over index subsets (size <= 24).
Poly pfaffian_matching(const PolyMatrix& m);
/// Fraction-free elimination via the Pfaffian Sylvester identity.
Poly pfaffian_elimination(const PolyMatrix& m);

/// Indices of a zero principal block, collected greedily from the last index down.
std::vector<std::size_t> zero_block(const PolyMatrix& m);
/// Matching expansion grouped by the partners of the zero principal block Z:
/// Pf = sum over S in R = complement(Z), |S| = |Z|, of
/// sign(S) * Pf(A[R \ S]) * det(A[S, Z]).
Poly pfaffian_zero_block(const PolyMatrix& m, std::span<const std::size_t> zero);
/// Largest number of partner subsets for which pfaffian() uses the grouped expansion.
inline constexpr std::size_t kZeroBlockSubsetCap = 200000;

/// Pfaffian of a skew rational matrix (even size).
Rational pfaffian(const RationalMatrix& m);

}  // namespace qinv
