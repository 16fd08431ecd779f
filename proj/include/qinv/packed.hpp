#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qinv/polymatrix.hpp"

namespace qinv {

/// Integer polynomial for results too large for Poly. Monomials are packed
/// into 128 bits with a fixed number of bits per variable; coefficients are
/// 128-bit integers and every operation checks for overflow (throws Error).
/// Terms are kept sorted by key with nonzero coefficients.
class PackedPoly {
 public:
  using Key = unsigned __int128;
  using Coeff = __int128;

  struct Layout {
    std::size_t num_vars = 0;
    unsigned bits = 0;
    /// Smallest layout whose fields hold exponents up to max_exponent;
    /// nullopt when num_vars * bits exceeds 128.
    static std::optional<Layout> for_degree(std::size_t num_vars, unsigned max_exponent);
    unsigned max_exponent() const { return (1u << bits) - 1; }
    bool operator==(const Layout&) const = default;
  };

  PackedPoly(ContextPtr ctx, Layout layout) : ctx_(std::move(ctx)), layout_(layout) {}

  /// Requires integer coefficients and exponents within the layout.
  static PackedPoly from_poly(const Poly& p, Layout layout);
  Poly to_poly() const;

  const ContextPtr& context() const { return ctx_; }
  const Layout& layout() const { return layout_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<std::pair<Key, Coeff>>& terms() const { return terms_; }

  unsigned exponent(Key key, std::size_t var) const;
  Key unit(std::size_t var) const { return Key{1} << (var * layout_.bits); }

  /// (deg_g, deg_V) when every term shares both degrees.
  std::optional<Bidegree> bidegree() const;

  /// Substitutes 0 or 1 for the listed variables.
  PackedPoly substitute_binary(std::span<const std::pair<std::size_t, bool>> values) const;

  /// Sum of sign * a_i * b_i, accumulated in a hash table. Exponent overflow is
  /// ruled out from the per-variable maxima of the factors.
  static PackedPoly sum_of_products(const std::vector<std::pair<PackedPoly, PackedPoly>>& pairs,
                                    const std::vector<int>& signs);

  /// Image under the derivation x_j -> images[j] (integer linear forms).
  /// Returns the number of nonzero terms of the image (0 when it vanishes).
  std::size_t derivation_image_size(const std::vector<std::vector<std::pair<std::size_t, Coeff>>>& images) const;

  bool operator==(const PackedPoly& other) const { return layout_ == other.layout_ && terms_ == other.terms_; }

 private:
  ContextPtr ctx_;
  Layout layout_;
  std::vector<std::pair<Key, Coeff>> terms_;
};

/// Determinant of an integer polynomial matrix by Laplace expansion along the
/// most expensive column: the complementary minors are computed as Poly and the
/// final products are accumulated in packed form.
PackedPoly det_packed(const PolyMatrix& m, PackedPoly::Layout layout);

}  // namespace qinv
