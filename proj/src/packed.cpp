#include "qinv/packed.hpp"

#include <algorithm>

#include <absl/container/flat_hash_map.h>
#include <absl/hash/hash.h>

namespace qinv {
namespace {

using Key = PackedPoly::Key;
using Coeff = PackedPoly::Coeff;

struct KeyHash {
  std::size_t operator()(Key k) const {
    return absl::Hash<std::pair<std::uint64_t, std::uint64_t>>()(
        {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(k >> 64)});
  }
};

using Table = absl::flat_hash_map<Key, Coeff, KeyHash>;

Coeff checked_add(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("packed polynomial: coefficient overflow");
  return r;
}

Coeff checked_mul(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("packed polynomial: coefficient overflow");
  return r;
}

Coeff to_coeff(const Rational& q) {
  if (q.get_den() != 1) throw Error("packed polynomial: non-integer coefficient");
  const mpz_class& z = q.get_num();
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 120) throw Error("packed polynomial: coefficient too large");
  mpz_class a = abs(z);
  mpz_class lo_part = a & mpz_class("18446744073709551615");
  mpz_class hi_part = a >> 64;
  Coeff c = (static_cast<Coeff>(mpz_get_ui(hi_part.get_mpz_t())) << 64) |
            static_cast<Coeff>(mpz_get_ui(lo_part.get_mpz_t()));
  return sgn(z) < 0 ? -c : c;
}

Rational from_coeff(Coeff c) {
  const bool neg = c < 0;
  unsigned __int128 a = neg ? -static_cast<unsigned __int128>(c) : static_cast<unsigned __int128>(c);
  mpz_class z = static_cast<unsigned long>(static_cast<std::uint64_t>(a >> 64));
  z <<= 64;
  z += static_cast<unsigned long>(static_cast<std::uint64_t>(a));
  if (neg) z = -z;
  return Rational(z);
}

std::vector<std::pair<Key, Coeff>> sorted_nonzero(Table& table) {
  std::vector<std::pair<Key, Coeff>> out;
  out.reserve(table.size());
  for (const auto& [k, c] : table)
    if (c != 0) out.emplace_back(k, c);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<unsigned> max_exponents(const PackedPoly& p) {
  std::vector<unsigned> mx(p.layout().num_vars, 0);
  for (const auto& [k, c] : p.terms())
    for (std::size_t v = 0; v < mx.size(); ++v) mx[v] = std::max(mx[v], p.exponent(k, v));
  return mx;
}

}  // namespace

std::optional<PackedPoly::Layout> PackedPoly::Layout::for_degree(std::size_t num_vars, unsigned max_exponent) {
  unsigned bits = 1;
  while ((1u << bits) - 1 < max_exponent) ++bits;
  if (num_vars * bits > 128) return std::nullopt;
  return Layout{num_vars, bits};
}

unsigned PackedPoly::exponent(Key key, std::size_t var) const {
  return static_cast<unsigned>((key >> (var * layout_.bits)) & layout_.max_exponent());
}

PackedPoly PackedPoly::from_poly(const Poly& p, Layout layout) {
  if (p.context()->size() != layout.num_vars) throw Error("packed polynomial: layout does not match the context");
  PackedPoly out(p.context(), layout);
  out.terms_.reserve(p.size());
  for (const auto& t : p.terms()) {
    Key k = 0;
    for (const auto& f : t.mono.factors()) {
      if (f.exp > layout.max_exponent()) throw Error("packed polynomial: exponent exceeds the layout");
      k += static_cast<Key>(f.exp) << (f.var * layout.bits);
    }
    out.terms_.emplace_back(k, to_coeff(t.coeff));
  }
  std::sort(out.terms_.begin(), out.terms_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Poly PackedPoly::to_poly() const {
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& [k, c] : terms_) {
    Monomial m;
    for (std::size_t v = 0; v < layout_.num_vars; ++v)
      if (unsigned e = exponent(k, v)) m.push_back_unchecked({static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(e)});
    terms.push_back({std::move(m), from_coeff(c)});
  }
  return Poly::from_terms(ctx_, std::move(terms));
}

std::optional<Bidegree> PackedPoly::bidegree() const {
  if (terms_.empty()) return Bidegree{};
  std::optional<Bidegree> out;
  const std::size_t num_g = ctx_->num_g();
  for (const auto& [k, c] : terms_) {
    Bidegree b;
    for (std::size_t v = 0; v < layout_.num_vars; ++v) (v < num_g ? b.g : b.v) += exponent(k, v);
    if (!out) out = b;
    else if (!(*out == b)) return std::nullopt;
  }
  return out;
}

PackedPoly PackedPoly::substitute_binary(std::span<const std::pair<std::size_t, bool>> values) const {
  PackedPoly out(ctx_, layout_);
  Table table;
  for (const auto& [k, c] : terms_) {
    Key key = k;
    bool dead = false;
    for (const auto& [var, one] : values) {
      unsigned e = exponent(key, var);
      if (e == 0) continue;
      if (!one) {
        dead = true;
        break;
      }
      key -= static_cast<Key>(e) << (var * layout_.bits);
    }
    if (dead) continue;
    auto& slot = table[key];
    slot = checked_add(slot, c);
  }
  out.terms_ = sorted_nonzero(table);
  return out;
}

PackedPoly PackedPoly::sum_of_products(const std::vector<std::pair<PackedPoly, PackedPoly>>& pairs,
                                       const std::vector<int>& signs) {
  if (pairs.empty()) throw Error("packed polynomial: empty product list");
  const auto& ctx = pairs.front().first.ctx_;
  const Layout layout = pairs.front().first.layout_;
  Table table;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    if (!(a.layout_ == layout) || !(b.layout_ == layout)) throw Error("packed polynomial: layout mismatch");
    if (a.is_zero() || b.is_zero()) continue;
    auto ma = max_exponents(a), mb = max_exponents(b);
    for (std::size_t v = 0; v < layout.num_vars; ++v)
      if (ma[v] + mb[v] > layout.max_exponent()) throw Error("packed polynomial: exponent exceeds the layout");
    for (const auto& [ka, ca] : a.terms_) {
      const Coeff sa = signs[i] < 0 ? -ca : ca;
      for (const auto& [kb, cb] : b.terms_) {
        auto& slot = table[ka + kb];
        slot = checked_add(slot, checked_mul(sa, cb));
      }
    }
  }
  PackedPoly out(ctx, layout);
  out.terms_ = sorted_nonzero(table);
  return out;
}

std::size_t PackedPoly::derivation_image_size(
    const std::vector<std::vector<std::pair<std::size_t, Coeff>>>& images) const {
  if (images.size() != layout_.num_vars) throw Error("packed polynomial: derivation size mismatch");
  std::vector<std::size_t> active;
  for (std::size_t v = 0; v < images.size(); ++v)
    if (!images[v].empty()) active.push_back(v);
  Table table;
  table.reserve(terms_.size());
  for (const auto& [k, c] : terms_) {
    for (std::size_t j : active) {
      unsigned e = exponent(k, j);
      if (e == 0) continue;
      const Key base = k - unit(j);
      const Coeff ce = checked_mul(c, static_cast<Coeff>(e));
      for (const auto& [var, coef] : images[j]) {
        if (exponent(base, var) == layout_.max_exponent()) throw Error("packed polynomial: exponent exceeds the layout");
        auto& slot = table[base + unit(var)];
        slot = checked_add(slot, checked_mul(ce, coef));
      }
    }
  }
  std::size_t nonzero = 0;
  for (const auto& [key, c] : table) nonzero += c != 0;
  return nonzero;
}

PackedPoly det_packed(const PolyMatrix& m, PackedPoly::Layout layout) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error("det_packed: matrix must be square and nonempty");
  const std::size_t n = m.rows();
  std::size_t col = 0, heaviest = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i) w += m(i, j).size();
    if (w > heaviest) heaviest = w, col = j;
  }
  std::vector<std::size_t> other_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (j != col) other_cols.push_back(j);
  std::vector<std::pair<PackedPoly, PackedPoly>> pairs;
  std::vector<int> signs;
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, col).is_zero()) continue;
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r)
      if (r != i) rows.push_back(r);
    Poly minor = n == 1 ? Poly::constant(m.context(), 1) : det(m.submatrix(rows, other_cols));
    pairs.emplace_back(PackedPoly::from_poly(m(i, col), layout), PackedPoly::from_poly(minor, layout));
    signs.push_back((i + col) % 2 ? -1 : 1);
  }
  if (pairs.empty()) return PackedPoly(m.context(), layout);
  return PackedPoly::sum_of_products(pairs, signs);
}

}  // namespace qinv
