#include "qinv/liealg.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "modp.hpp"
#include "qinv/gcd.hpp"
#include "qinv/linalg.hpp"

namespace qinv {

void SemidirectSpec::validate() const {
  if (n < 2) throw Error("spec: n must be at least 2");
  if (m < 1) throw Error("spec: m must be at least 1");
  if (k < 0 || k > m) throw Error("spec: need 0 <= k <= m");
}

std::string SemidirectSpec::to_string() const {
  return std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(k);
}

SemidirectSpec parse_spec(const std::string& text) {
  SemidirectSpec s;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> s.n >> c1 >> s.m >> c2 >> s.k) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
    throw Error("spec: expected n,m,k but got '" + text + "'");
  s.validate();
  return s;
}

std::string BasisLabel::to_string() const {
  switch (kind) {
    case BasisKind::E:
      return "E" + std::to_string(i) + "_" + std::to_string(j);
    case BasisKind::H:
      return "H" + std::to_string(i);
    case BasisKind::Covector:
      return "e*" + std::to_string(j) + "[" + std::to_string(i) + "]";
    case BasisKind::Vector:
      return "e" + std::to_string(j) + "[" + std::to_string(i) + "]";
  }
  return "?";
}

std::size_t LieAlgebraData::index_E(int i, int j) const {
  const int n = spec_.n;
  if (i == j || i < 1 || j < 1 || i > n || j > n) throw Error("index_E: bad indices");
  return static_cast<std::size_t>((i - 1) * (n - 1) + (j - 1) - (j > i ? 1 : 0));
}

std::size_t LieAlgebraData::index_H(int i) const {
  const int n = spec_.n;
  if (i < 1 || i >= n) throw Error("index_H: bad index");
  return static_cast<std::size_t>(n * (n - 1) + i - 1);
}

std::size_t LieAlgebraData::index_covector(int a, int j) const {
  if (a < 1 || a > spec_.m || j < 1 || j > spec_.n) throw Error("index_covector: bad indices");
  return dim_g_ + static_cast<std::size_t>((a - 1) * spec_.n + j - 1);
}

std::size_t LieAlgebraData::index_vector(int b, int j) const {
  if (b < 1 || b > spec_.k || j < 1 || j > spec_.n) throw Error("index_vector: bad indices");
  return dim_g_ + static_cast<std::size_t>((spec_.m + b - 1) * spec_.n + j - 1);
}

std::string LieAlgebraData::structure_constants_text() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i + 1; j < dim(); ++j) {
      const auto& b = bracket(i, j);
      if (b.empty()) continue;
      out << "(" << i + 1 << "," << j + 1 << ") -> [";
      for (std::size_t t = 0; t < b.size(); ++t)
        out << (t ? ", " : "") << "(" << b[t].first + 1 << ", " << b[t].second.get_str() << ")";
      out << "]\n";
    }
  return out.str();
}

namespace {

// Dense n x n rational matrix helper for brackets in sl_n.
using Square = std::vector<std::vector<Rational>>;

Square basis_matrix(const LieAlgebraData& q, std::size_t t) {
  const int n = q.spec().n;
  Square s(n, std::vector<Rational>(n));
  const auto& l = q.labels()[t];
  if (l.kind == BasisKind::E) {
    s[l.i - 1][l.j - 1] = 1;
  } else {
    s[l.i - 1][l.i - 1] = 1;
    s[l.i][l.i] = -1;
  }
  return s;
}

SparseVector decompose(const LieAlgebraData& q, const Square& s) {
  const int n = q.spec().n;
  SparseVector out;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (r != c && s[r][c] != 0) out.emplace_back(q.index_E(r + 1, c + 1), s[r][c]);
  Rational acc = 0;
  for (int i = 1; i < n; ++i) {
    acc += s[i - 1][i - 1];
    if (acc != 0) out.emplace_back(q.index_H(i), acc);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SparseVector negated(SparseVector v) {
  for (auto& e : v) e.second = -e.second;
  return v;
}

// sum_t u_t [t, l]
SparseVector bracket_vec(const LieAlgebraData& q, const SparseVector& u, std::size_t l) {
  std::vector<Rational> acc(q.dim());
  for (const auto& [t, c] : u)
    for (const auto& [s, d] : q.bracket(t, l)) acc[s] += c * d;
  SparseVector out;
  for (std::size_t s = 0; s < acc.size(); ++s)
    if (acc[s] != 0) out.emplace_back(s, acc[s]);
  return out;
}

bool jacobi_triple(const LieAlgebraData& q, std::size_t i, std::size_t j, std::size_t l) {
  std::vector<Rational> acc(q.dim());
  auto add = [&](const SparseVector& v) {
    for (const auto& [s, c] : v) acc[s] += c;
  };
  add(bracket_vec(q, q.bracket(i, j), l));
  add(bracket_vec(q, q.bracket(j, l), i));
  add(bracket_vec(q, q.bracket(l, i), j));
  return std::all_of(acc.begin(), acc.end(), [](const Rational& x) { return x == 0; });
}

}  // namespace

LieAlgebraData build_semidirect(const SemidirectSpec& spec, std::size_t dim_cap) {
  spec.validate();
  if (static_cast<std::size_t>(spec.dim()) > dim_cap) throw CapExceeded("dim", dim_cap, spec.dim());
  const int n = spec.n;
  LieAlgebraData q;
  q.spec_ = spec;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) q.labels_.push_back({BasisKind::E, i, j});
  for (int i = 1; i < n; ++i) q.labels_.push_back({BasisKind::H, i, 0});
  q.dim_g_ = q.labels_.size();
  for (int a = 1; a <= spec.m; ++a)
    for (int j = 1; j <= n; ++j) q.labels_.push_back({BasisKind::Covector, a, j});
  for (int b = 1; b <= spec.k; ++b)
    for (int j = 1; j <= n; ++j) q.labels_.push_back({BasisKind::Vector, b, j});
  const std::size_t dim = q.labels_.size();
  q.ctx_ = make_context(q.dim_g_, dim - q.dim_g_);
  q.table_.assign(dim * dim, {});

  std::vector<Square> mats;
  for (std::size_t t = 0; t < q.dim_g_; ++t) mats.push_back(basis_matrix(q, t));

  for (std::size_t a = 0; a < q.dim_g_; ++a) {
    for (std::size_t b = a + 1; b < q.dim_g_; ++b) {
      Square c(n, std::vector<Rational>(n));
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t) c[r][s] += mats[a][r][t] * mats[b][t][s] - mats[b][r][t] * mats[a][t][s];
      auto v = decompose(q, c);
      q.table_[b * dim + a] = negated(v);
      q.table_[a * dim + b] = std::move(v);
    }
    // Action on V: e_j^* -> -sum_l xi_jl e_l^*, e_j -> sum_l xi_lj e_l.
    const Square& xi = mats[a];
    for (std::size_t u = q.dim_g_; u < dim; ++u) {
      const auto& l = q.labels_[u];
      SparseVector v;
      for (int p = 1; p <= n; ++p) {
        if (l.kind == BasisKind::Covector) {
          if (xi[l.j - 1][p - 1] != 0) v.emplace_back(q.index_covector(l.i, p), -xi[l.j - 1][p - 1]);
        } else if (xi[p - 1][l.j - 1] != 0) {
          v.emplace_back(q.index_vector(l.i, p), xi[p - 1][l.j - 1]);
        }
      }
      q.table_[u * dim + a] = negated(v);
      q.table_[a * dim + u] = std::move(v);
    }
  }

  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (q.bracket(i, j) != negated(q.bracket(j, i))) throw Error("build_semidirect: bracket not antisymmetric");
  if (!jacobi_holds(q, dim <= kJacobiExhaustiveDim, 500, 1))
    throw Error("build_semidirect: Jacobi identity fails");
  return q;
}

bool jacobi_holds(const LieAlgebraData& q, bool exhaustive, std::size_t samples, std::uint64_t seed) {
  const std::size_t d = q.dim();
  if (exhaustive) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        for (std::size_t l = j + 1; l < d; ++l)
          if (!jacobi_triple(q, i, j, l)) return false;
    return true;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s)
    if (!jacobi_triple(q, rng() % d, rng() % d, rng() % d)) return false;
  return true;
}

PolyMatrix structure_matrix(const LieAlgebraData& q) {
  PolyMatrix m(q.context(), q.dim(), q.dim());
  for (std::size_t i = 0; i < q.dim(); ++i)
    for (std::size_t j = 0; j < q.dim(); ++j) {
      std::vector<Term> terms;
      for (const auto& [k, c] : q.bracket(i, j)) terms.push_back({Monomial::variable(k), c});
      m(i, j) = Poly::from_terms(q.context(), std::move(terms));
    }
  return m;
}

Poly lie_derivative(const LieAlgebraData& q, std::size_t i, const Poly& f) {
  if (!same_context(f.context(), q.context())) throw Error("lie_derivative: context mismatch");
  if (i >= q.dim()) throw Error("lie_derivative: basis index out of range");
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    for (const auto& factor : t.mono.factors()) {
      const auto& br = q.bracket(i, factor.var);
      if (br.empty()) continue;
      Monomial lowered = t.mono.lowered(factor.var);
      Rational base = t.coeff * factor.exp;
      for (const auto& [k, c] : br) out.push_back({lowered * Monomial::variable(k), base * c});
    }
  }
  return Poly::from_terms(q.context(), std::move(out));
}

PolyMatrix g_matrix(const LieAlgebraData& q) {
  const int n = q.spec().n;
  const auto& ctx = q.context();
  PolyMatrix a(ctx, n, n);
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c)
      if (r != c) a(r - 1, c - 1) = Poly::variable(ctx, q.index_E(c, r));
  // A_ii = sum_{j >= i} h_j - (1/n) sum_j j h_j
  for (int i = 1; i <= n; ++i) {
    std::vector<Term> terms;
    for (int j = 1; j < n; ++j) {
      Rational c = make_rational(-j, n);
      if (j >= i) c += 1;
      if (c != 0) terms.push_back({Monomial::variable(q.index_H(j)), c});
    }
    a(i - 1, i - 1) = Poly::from_terms(ctx, std::move(terms));
  }
  return a;
}

PolyMatrix covector_matrix(const LieAlgebraData& q) {
  const auto& s = q.spec();
  PolyMatrix v(q.context(), s.n, s.m);
  for (int j = 1; j <= s.n; ++j)
    for (int a = 1; a <= s.m; ++a) v(j - 1, a - 1) = Poly::variable(q.context(), q.index_covector(a, j));
  return v;
}

PolyMatrix vector_matrix(const LieAlgebraData& q) {
  const auto& s = q.spec();
  if (s.k == 0) throw Error("vector_matrix: k = 0");
  PolyMatrix w(q.context(), s.k, s.n);
  for (int b = 1; b <= s.k; ++b)
    for (int j = 1; j <= s.n; ++j) w(b - 1, j - 1) = Poly::variable(q.context(), q.index_vector(b, j));
  return w;
}

std::vector<Rational> random_point(std::size_t size, std::uint64_t seed, std::uint64_t trial, int bound) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + trial + 1);
  const std::uint64_t span = 2 * static_cast<std::uint64_t>(bound) + 1;
  std::vector<Rational> p(size);
  for (auto& x : p) x = static_cast<long>(rng() % span) - bound;
  return p;
}

std::size_t generic_rank(const LieAlgebraData& q, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error("generic_rank: need at least one trial");
  std::size_t best = 0;
  for (int t = 0; t < trials; ++t) {
    auto pt = random_point(q.dim(), seed, t);
    RationalMatrix m(q.dim(), q.dim());
    for (std::size_t i = 0; i < q.dim(); ++i)
      for (std::size_t j = 0; j < q.dim(); ++j)
        for (const auto& [k, c] : q.bracket(i, j)) m(i, j) += c * pt[k];
    best = std::max(best, rank(std::move(m)));
  }
  return best;
}

int index_by_rank(const LieAlgebraData& q, int trials, std::uint64_t seed) {
  return static_cast<int>(q.dim() - generic_rank(q, trials, seed));
}

GenericStabilizerSpec generic_stabilizer(const SemidirectSpec& spec) {
  spec.validate();
  const int n = spec.n, m = spec.m, k = spec.k;
  if (m >= n || (m == k && k == n - 1)) return {StabilizerKind::Zero, "0", 0, 0, 0, std::nullopt};
  if (m == k) {
    const int s = n - k;
    const int dim = s * s - 1;
    return {StabilizerKind::Special, "sl_" + std::to_string(s), dim, s - 1, make_rational(dim + s - 1, 2), std::nullopt};
  }
  const int np = n - m, mp = m - k;
  const std::string desc = "sl_" + std::to_string(np) + " x| " + std::to_string(mp) + "C^" + std::to_string(np);
  if (np == 1) return {StabilizerKind::SemidirectDual, desc, mp, mp, Rational(mp), std::nullopt};
  SemidirectSpec inner{np, mp, 0};
  const int dim = inner.dim();
  const int ind = index_by_rais(inner);
  return {StabilizerKind::SemidirectDual, desc, dim, ind, make_rational(dim + ind, 2), inner};
}

int index_by_rais(const SemidirectSpec& spec) {
  const auto gs = generic_stabilizer(spec);
  return spec.dim_v() - (spec.dim_g() - gs.dim_gx) + gs.ind_gx;
}

Rational b_of_q(const SemidirectSpec& spec) { return make_rational(index_by_rais(spec) + spec.dim(), 2); }

namespace {

using modp::u64;

// M(q) at a point modulo 2^61 - 1, row-major.
std::vector<u64> structure_matrix_mod(const LieAlgebraData& q, const std::vector<u64>& x) {
  const std::size_t d = q.dim();
  std::vector<u64> out(d * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      u64 s = 0;
      for (const auto& [t, c] : q.bracket(i, j)) s = modp::addm(s, modp::mulm(*modp::to_mod(c), x[t]));
      out[i * d + j] = s;
    }
  return out;
}

// Pf(M_S) on the line a + t b as coefficients in t; M has linear entries, so
// M(a + t b) = M(a) + t M(b) and the degree is at most |S| / 2.
modp::UPoly pfaffian_on_line(const std::vector<u64>& a, const std::vector<u64>& b, std::size_t d,
                             const std::vector<std::size_t>& s) {
  const std::size_t r = s.size();
  std::vector<u64> nodes, values, work(r * r);
  for (u64 t = 0; t <= r / 2; ++t) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const std::size_t at = s[i] * d + s[j];
        work[i * r + j] = modp::addm(a[at], modp::mulm(t, b[at]));
      }
    nodes.push_back(t);
    values.push_back(modp::pfaffian(work, r));
  }
  auto u = modp::interpolate(nodes, std::move(values));
  modp::trim(u);
  return u;
}

// Next r-subset of {0..d-1} in lexicographic order; false after the last.
bool next_subset(std::vector<std::size_t>& subset, std::size_t d) {
  const std::size_t r = subset.size();
  std::size_t i = r;
  while (i > 0 && subset[i - 1] == d - r + i - 1) --i;
  if (i == 0) return false;
  ++subset[i - 1];
  for (std::size_t j = i; j < r; ++j) subset[j] = subset[j - 1] + 1;
  return true;
}

}  // namespace

SemiInvariantResult fundamental_semi_invariant(const LieAlgebraData& q, std::uint64_t seed, std::size_t dim_cap,
                                               std::size_t minor_cap) {
  if (q.dim() > dim_cap) throw CapExceeded("pfaffian-dim", dim_cap, q.dim());
  SemiInvariantResult res{Poly(q.context())};
  res.seed = seed;
  res.rank = generic_rank(q, kDefaultTrials, seed);
  if (res.rank % 2) throw Error("fundamental_semi_invariant: odd rank detected");
  const std::size_t d = q.dim(), r = res.rank;
  if (r == 0) {
    res.p = Poly::constant(q.context(), 1);
    return res;
  }
  // Number of subsets, saturating at the largest size_t.
  std::size_t count = 1;
  for (std::size_t i = 0; i < std::min(r, d - r); ++i) {
    const std::size_t next = count * (d - i);
    count = next / (d - i) == count ? next / (i + 1) : std::numeric_limits<std::size_t>::max();
    if (count == std::numeric_limits<std::size_t>::max()) break;
  }
  res.minors_total = count;

  // First pass: every Pfaffian restricted to one random line modulo the
  // prime. The gcd of the restrictions bounds deg p once some restriction
  // keeps the full degree r/2 (Pfaffians of M are homogeneous of that
  // degree), so degree 0 certifies p = 1 without expanding anything. The
  // minors that lowered the line gcd are remembered for the exact pass.
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 53);
  std::vector<u64> y(q.context()->size()), dir(y.size());
  for (auto& x : y) x = modp::random_unit(rng);
  for (auto& x : dir) x = modp::random_unit(rng);
  const auto ma = structure_matrix_mod(q, y), mb = structure_matrix_mod(q, dir);
  modp::UPoly running;
  bool any = false, anchored = false;
  std::vector<std::vector<std::size_t>> sharp;
  std::vector<std::size_t> subset(r);
  for (std::size_t i = 0; i < r; ++i) subset[i] = i;
  std::size_t visited = 0, line_nonzero = 0;
  do {
    if (++visited > minor_cap) throw CapExceeded("minors", minor_cap, count);
    auto u = pfaffian_on_line(ma, mb, d, subset);
    if (u.empty()) continue;
    ++line_nonzero;
    if (u.size() == r / 2 + 1) anchored = true;
    const std::size_t before = any ? running.size() : std::numeric_limits<std::size_t>::max();
    running = any ? modp::monic_gcd(std::move(running), std::move(u)) : modp::monic_gcd(std::move(u), {});
    any = true;
    if (running.size() < before) sharp.push_back(subset);
    if (anchored && running.size() == 1) {
      res.p = Poly::constant(q.context(), 1);
      res.minors_used = line_nonzero;
      res.minors_zero = visited - line_nonzero;
      res.minors_skipped = count - visited;
      return res;
    }
  } while (next_subset(subset, d));
  if (!any) throw Error("fundamental_semi_invariant: all principal Pfaffians vanish; retry with another seed");

  // Exact pass over every minor. The sharp minors go first, smallest
  // Pfaffian first, so the gcd is usually final early and the remaining
  // minors cost one exact division each.
  const PolyMatrix m = structure_matrix(q);
  auto fold = [&](const Poly& pf) {
    if (pf.is_zero()) {
      ++res.minors_zero;
      return;
    }
    ++res.minors_used;
    if (res.p.is_zero()) res.p = normalize(pf);
    else if (!res.p.is_constant() && !divide_exact(pf, res.p)) res.p = gcd_multi(res.p, pf);
  };
  std::vector<Poly> first;
  for (const auto& s : sharp) first.push_back(pfaffian(m.principal_minor(s)));
  std::stable_sort(first.begin(), first.end(), [](const Poly& x, const Poly& z) { return x.size() < z.size(); });
  for (const auto& pf : first) fold(pf);
  for (std::size_t i = 0; i < r; ++i) subset[i] = i;
  visited = sharp.size();
  do {
    if (std::binary_search(sharp.begin(), sharp.end(), subset)) continue;
    if (res.p.is_constant() && !res.p.is_zero()) {
      res.minors_skipped = count - visited;
      break;
    }
    ++visited;
    fold(pfaffian(m.principal_minor(subset)));
  } while (next_subset(subset, d));
  if (res.p.is_zero())
    throw Error("fundamental_semi_invariant: all principal Pfaffians vanish; retry with another seed");
  return res;
}

}  // namespace qinv
