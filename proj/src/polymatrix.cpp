#include "qinv/polymatrix.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace qinv {

PolyMatrix::PolyMatrix(ContextPtr ctx, std::size_t rows, std::size_t cols)
    : ctx_(std::move(ctx)), rows_(rows), cols_(cols), data_(rows * cols, Poly(ctx_)) {
  if (rows == 0 || cols == 0) throw Error("PolyMatrix: dimensions must be positive");
}

void PolyMatrix::set(std::size_t i, std::size_t j, Poly p) {
  if (!same_context(p.context(), ctx_)) throw Error("PolyMatrix: context mismatch");
  (*this)(i, j) = std::move(p);
}

PolyMatrix PolyMatrix::submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  PolyMatrix out(ctx_, rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(rows[i], cols[j]);
  return out;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix out(ctx_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool PolyMatrix::is_skew() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (!(*this)(i, i).is_zero()) return false;
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!((*this)(i, j) + (*this)(j, i)).is_zero()) return false;
  }
  return true;
}

RationalMatrix PolyMatrix::evaluate(std::span<const Rational> point) const {
  RationalMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero()) out(i, j) = qinv::evaluate((*this)(i, j), point);
  return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("PolyMatrix: dimension mismatch in product");
  if (!same_context(a.ctx_, b.ctx_)) throw Error("PolyMatrix: context mismatch");
  PolyMatrix out(a.ctx_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      Poly acc(a.ctx_);
      for (std::size_t l = 0; l < a.cols_; ++l) {
        if (a(i, l).is_zero() || b(l, j).is_zero()) continue;
        acc += a(i, l) * b(l, j);
      }
      out(i, j) = std::move(acc);
    }
  return out;
}

namespace {

void require_square(const PolyMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(std::string(what) + ": matrix is not square");
}

int permutation_sign(const std::vector<std::size_t>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

}  // namespace

Poly det(const PolyMatrix& m) {
  require_square(m, "det");
  return m.rows() <= kCofactorThreshold ? det_cofactor(m) : det_bareiss(m);
}

Poly det_cofactor(const PolyMatrix& m) {
  require_square(m, "det");
  const std::size_t n = m.rows();
  if (n > 24) throw CapExceeded("cofactor-size", 24, n);
  // Cheap columns first, so the memoized minors stay small.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> weight(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) weight[j] += m(i, j).size();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight[a] < weight[b]; });

  // minors[mask] = det of rows in mask against the first popcount(mask) ordered columns.
  std::unordered_map<std::uint32_t, Poly> minors;
  minors.emplace(0u, Poly::constant(m.context(), 1));
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t col = order[c];
    std::unordered_map<std::uint32_t, Poly> next;
    // Deterministic iteration: sort the masks.
    std::vector<std::uint32_t> masks;
    masks.reserve(minors.size());
    for (const auto& [mask, p] : minors) masks.push_back(mask);
    std::sort(masks.begin(), masks.end());
    for (std::uint32_t mask : masks) {
      const Poly& minor = minors.at(mask);
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) continue;
        if (m(i, col).is_zero()) continue;
        // Row i takes position popcount(rows above i in the new mask) in the new minor;
        // expanding along the last column c gives sign (-1)^(pos + c).
        const int pos = std::popcount(mask & ((1u << i) - 1));
        Poly term = m(i, col) * minor;
        if ((pos + c) % 2) term = -term;
        auto [it, inserted] = next.try_emplace(mask | (1u << i), std::move(term));
        if (!inserted) it->second += term;
      }
    }
    std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
    minors = std::move(next);
    if (minors.empty()) return Poly(m.context());
  }
  Poly result = minors.begin()->second;
  return permutation_sign(order) < 0 ? -result : result;
}

Poly det_bareiss(const PolyMatrix& m) {
  require_square(m, "det");
  const std::size_t n = m.rows();
  std::vector<std::vector<Poly>> a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i].push_back(m(i, j));
  Poly prev = Poly::constant(m.context(), 1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (!a[i][k].is_zero() && (piv == n || a[i][k].size() < a[piv][k].size())) piv = i;
    if (piv == n) return Poly(m.context());
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Poly num = a[k][k] * a[i][j];
        if (!a[i][k].is_zero() && !a[k][j].is_zero()) num -= a[i][k] * a[k][j];
        a[i][j] = divide_or_throw(num, prev);
      }
      a[i][k] = Poly(m.context());
    }
    prev = a[k][k];
  }
  return sign < 0 ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

namespace {

void require_skew(const PolyMatrix& m) {
  require_square(m, "pfaffian");
  if (m.rows() % 2) throw Error("pfaffian: odd size");
  if (!m.is_skew()) throw Error("pfaffian: matrix is not skew-symmetric");
}

// Elimination through the Pfaffian Sylvester identity. With I the pivots
// chosen so far (|I| = 2t) and P_t(i,j) = Pf(A[I, i, j]):
//   Pf(A[I]) * P_{t+1}(i,j) = P_t(a,b) P_t(i,j) - P_t(a,i) P_t(b,j) + P_t(a,j) P_t(b,i)
// where (a,b) is the next pivot pair.
template <class T, class IsZero, class Size, class Divide>
T pfaffian_eliminate(std::vector<std::vector<T>> p, T one, IsZero is_zero, Size size, Divide divide) {
  const std::size_t n = p.size();
  std::vector<std::size_t> rest(n);
  std::iota(rest.begin(), rest.end(), 0);
  std::vector<std::size_t> order;
  T prev = one;
  while (rest.size() > 2) {
    std::size_t ba = 0, bb = 0;
    bool found = false;
    for (std::size_t x = 0; x < rest.size(); ++x)
      for (std::size_t y = x + 1; y < rest.size(); ++y) {
        const T& e = p[rest[x]][rest[y]];
        if (is_zero(e)) continue;
        // Ties go to the later pair, which favours indices at the end.
        if (!found || size(e) <= size(p[rest[ba]][rest[bb]])) {
          ba = x;
          bb = y;
          found = true;
        }
      }
    if (!found) return T(one) - one;
    const std::size_t a = rest[ba], b = rest[bb];
    order.push_back(a);
    order.push_back(b);
    rest.erase(rest.begin() + bb);
    rest.erase(rest.begin() + ba);
    const T piv = p[a][b];
    for (std::size_t x = 0; x < rest.size(); ++x)
      for (std::size_t y = x + 1; y < rest.size(); ++y) {
        const std::size_t i = rest[x], j = rest[y];
        T num = piv * p[i][j];
        if (!is_zero(p[a][i]) && !is_zero(p[b][j])) num = num - p[a][i] * p[b][j];
        if (!is_zero(p[a][j]) && !is_zero(p[b][i])) num = num + p[a][j] * p[b][i];
        T val = divide(num, prev);
        p[j][i] = T(one) - one - val;
        p[i][j] = std::move(val);
      }
    prev = piv;
  }
  order.push_back(rest[0]);
  order.push_back(rest[1]);
  T result = p[rest[0]][rest[1]];
  return permutation_sign(order) < 0 ? T(one) - one - result : result;
}

}  // namespace

namespace {

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  std::size_t c = 1;
  for (std::size_t i = 0; i < std::min(k, n - k); ++i) {
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return c;
}

}  // namespace

Poly pfaffian(const PolyMatrix& m) {
  require_skew(m);
  if (m.rows() <= kMatchingThreshold) return pfaffian_matching(m);
  auto zero = zero_block(m);
  const std::size_t rest = m.rows() - zero.size();
  if (zero.size() >= 2 && rest <= 32 &&
      binomial_capped(rest, zero.size(), kZeroBlockSubsetCap) <= kZeroBlockSubsetCap)
    return pfaffian_zero_block(m, zero);
  return pfaffian_elimination(m);
}

std::vector<std::size_t> zero_block(const PolyMatrix& m) {
  require_square(m, "zero_block");
  std::vector<std::size_t> zero;
  for (std::size_t i = m.rows(); i-- > 0;) {
    bool fits = m(i, i).is_zero();
    for (std::size_t j : zero) fits = fits && m(i, j).is_zero() && m(j, i).is_zero();
    if (fits) zero.push_back(i);
  }
  std::reverse(zero.begin(), zero.end());
  return zero;
}

Poly pfaffian_zero_block(const PolyMatrix& m, std::span<const std::size_t> zero) {
  require_skew(m);
  const std::size_t n = m.rows(), p = zero.size();
  std::vector<char> in_zero(n, 0);
  for (std::size_t z : zero) {
    if (z >= n || in_zero[z]) throw Error("pfaffian_zero_block: bad block indices");
    in_zero[z] = 1;
  }
  for (std::size_t a : zero)
    for (std::size_t b : zero)
      if (!m(a, b).is_zero()) throw Error("pfaffian_zero_block: block is not zero");
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < n; ++i)
    if (!in_zero[i]) r.push_back(i);
  const std::size_t s = r.size();
  if (p > s) return Poly(m.context());
  if (s > 32) throw CapExceeded("zero-block-rest", 32, s);
  const ContextPtr& ctx = m.context();
  std::vector<std::size_t> z(zero.begin(), zero.end());
  std::sort(z.begin(), z.end());

  // det(A[S, Z]) for every row set S of size p, by Laplace expansion along
  // the columns of Z (same scheme as det_cofactor).
  std::unordered_map<std::uint32_t, Poly> minors;
  minors.emplace(0u, Poly::constant(ctx, 1));
  for (std::size_t c = 0; c < p; ++c) {
    std::unordered_map<std::uint32_t, Poly> next;
    std::vector<std::uint32_t> masks;
    for (const auto& kv : minors) masks.push_back(kv.first);
    std::sort(masks.begin(), masks.end());
    for (std::uint32_t mask : masks) {
      const Poly& minor = minors.at(mask);
      for (std::size_t i = 0; i < s; ++i) {
        if (mask & (1u << i)) continue;
        const Poly& e = m(r[i], z[c]);
        if (e.is_zero()) continue;
        const int pos = std::popcount(mask & ((1u << i) - 1));
        Poly term = e * minor;
        if ((pos + c) % 2) term = -term;
        auto [it, inserted] = next.try_emplace(mask | (1u << i), std::move(term));
        if (!inserted) it->second += term;
      }
    }
    std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
    minors = std::move(next);
    if (minors.empty()) return Poly(ctx);
  }

  // Pf(A[C]) for subsets C of R, memoized.
  std::unordered_map<std::uint32_t, Poly> memo;
  auto pf = [&](auto&& self, std::uint32_t mask) -> Poly {
    if (mask == 0) return Poly::constant(ctx, 1);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const int i0 = std::countr_zero(mask);
    Poly acc(ctx);
    std::uint32_t others = mask & ~(1u << i0);
    int pos = 0;
    for (std::uint32_t bits = others; bits; bits &= bits - 1) {
      const int j = std::countr_zero(bits);
      ++pos;
      const Poly& e = m(r[i0], r[j]);
      if (e.is_zero()) continue;
      Poly sub = self(self, others & ~(1u << j));
      if (sub.is_zero()) continue;
      Poly term = e * sub;
      if (pos % 2 == 0) term = -term;
      acc += term;
    }
    memo.emplace(mask, acc);
    return acc;
  };

  const std::uint32_t full = s == 32 ? ~0u : ((1u << s) - 1);
  const int block_sign = (p * (p - 1) / 2) % 2 ? -1 : 1;
  std::vector<std::uint32_t> masks;
  for (const auto& kv : minors) masks.push_back(kv.first);
  std::sort(masks.begin(), masks.end());
  Poly total(ctx);
  std::vector<std::size_t> order;
  for (std::uint32_t mask : masks) {
    Poly rest = pf(pf, full & ~mask);
    if (rest.is_zero()) continue;
    order.clear();
    for (std::size_t i = 0; i < s; ++i)
      if (!(mask & (1u << i))) order.push_back(r[i]);
    for (std::size_t i = 0; i < s; ++i)
      if (mask & (1u << i)) order.push_back(r[i]);
    order.insert(order.end(), z.begin(), z.end());
    Poly term = rest * minors.at(mask);
    if (permutation_sign(order) * block_sign < 0) term = -term;
    total += term;
  }
  return total;
}

Poly pfaffian_matching(const PolyMatrix& m) {
  require_skew(m);
  const std::size_t n = m.rows();
  if (n > 24) throw CapExceeded("matching-size", 24, n);
  std::unordered_map<std::uint32_t, Poly> memo;
  // pf(S) = sum_{j in S, j > i0} (-1)^{pos(j)-1} a_{i0 j} pf(S \ {i0, j}), i0 = min S.
  auto rec = [&](auto&& self, std::uint32_t mask) -> Poly {
    if (mask == 0) return Poly::constant(m.context(), 1);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const int i0 = std::countr_zero(mask);
    Poly acc(m.context());
    std::uint32_t others = mask & ~(1u << i0);
    int pos = 0;
    for (std::uint32_t bits = others; bits; bits &= bits - 1) {
      const int j = std::countr_zero(bits);
      ++pos;
      if (m(i0, j).is_zero()) continue;
      Poly sub = self(self, others & ~(1u << j));
      if (sub.is_zero()) continue;
      Poly term = m(i0, j) * sub;
      if (pos % 2 == 0) term = -term;
      acc += term;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  return rec(rec, full);
}

Poly pfaffian_elimination(const PolyMatrix& m) {
  require_skew(m);
  const std::size_t n = m.rows();
  if (n > kPfaffianCap) throw CapExceeded("pfaffian-size", kPfaffianCap, n);
  std::vector<std::vector<Poly>> p(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i].push_back(m(i, j));
  return pfaffian_eliminate<Poly>(
      std::move(p), Poly::constant(m.context(), 1), [](const Poly& x) { return x.is_zero(); },
      [](const Poly& x) { return x.size(); }, [](const Poly& a, const Poly& b) { return divide_or_throw(a, b); });
}

Rational pfaffian(const RationalMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2) throw Error("pfaffian: need an even square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i][j] = m(i, j);
  return pfaffian_eliminate<Rational>(
      std::move(p), Rational(1), [](const Rational& x) { return x == 0; }, [](const Rational&) { return 0; },
      [](const Rational& a, const Rational& b) { return Rational(a / b); });
}

}  // namespace qinv
