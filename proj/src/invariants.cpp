#include "qinv/invariants.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qinv/linalg.hpp"

namespace qinv {

std::string to_string(Construction c) {
  switch (c) {
    case Construction::DeltaI: return "DeltaI";
    case Construction::Pairing: return "Pairing";
    case Construction::F_I: return "F_I";
    case Construction::CharPoly: return "CharPoly";
    case Construction::MixedRestricted: return "MixedRestricted";
    case Construction::MixedGlobal: return "MixedGlobal";
    case Construction::FinderSolution: return "FinderSolution";
  }
  return "?";
}

std::string InvariantCandidate::label() const {
  std::ostringstream out;
  out << to_string(construction);
  if (from_w) out << "_w";
  if (construction == Construction::Pairing && subset.size() == 2) {
    out << "{w" << subset[0] << ",v" << subset[1] << "}";
    return out.str();
  }
  if (!subset.empty()) {
    out << "{";
    for (std::size_t i = 0; i < subset.size(); ++i) out << (i ? "," : "") << subset[i];
    out << "}";
  }
  return out.str();
}

std::vector<std::vector<int>> subsets(int m, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > m) return out;
  std::vector<int> cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == m - r + i + 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

namespace {

std::vector<std::size_t> iota_vec(std::size_t from, std::size_t to) {
  std::vector<std::size_t> v;
  for (std::size_t i = from; i < to; ++i) v.push_back(i);
  return v;
}

std::vector<std::size_t> zero_based(const std::vector<int>& s) {
  std::vector<std::size_t> out;
  for (int i : s) out.push_back(static_cast<std::size_t>(i - 1));
  return out;
}

PolyMatrix columns(const PolyMatrix& m, const std::vector<std::size_t>& cols) {
  auto rows = iota_vec(0, m.rows());
  return m.submatrix(rows, cols);
}

PolyMatrix hstack(const std::vector<PolyMatrix>& blocks) {
  std::size_t cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  PolyMatrix out(blocks.front().context(), blocks.front().rows(), cols);
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, c0 + j) = b(i, j);
    c0 += b.cols();
  }
  return out;
}

void check_subset(const std::vector<int>& s, int m, std::size_t expected_size, const char* what) {
  if (s.size() != expected_size)
    throw Error(std::string(what) + ": subset must have " + std::to_string(expected_size) + " elements");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1 || s[i] > m) throw Error(std::string(what) + ": subset element out of range");
    if (i && s[i] <= s[i - 1]) throw Error(std::string(what) + ": subset must be strictly increasing");
  }
}

// Columns v, Av, ..., A^{q-1} v, A^q v_I.
PolyMatrix F_I_matrix(const PolyMatrix& a, const PolyMatrix& v, int qq, const std::vector<int>& subset) {
  std::vector<PolyMatrix> blocks;
  PolyMatrix power = v;
  for (int i = 0; i < qq; ++i) {
    blocks.push_back(power);
    power = a * power;
  }
  blocks.push_back(columns(power, zero_based(subset)));
  return hstack(blocks);
}

InvariantCandidate make_candidate(Poly p, Construction c, std::vector<int> subset, std::string note) {
  auto bd = bidegree(p);
  InvariantCandidate out{std::move(p), bd, c, std::move(subset), true, std::move(note)};
  return out;
}

}  // namespace

std::vector<InvariantCandidate> v_invariant_generators(const LieAlgebraData& q) {
  const auto& s = q.spec();
  std::vector<InvariantCandidate> out;
  auto v = covector_matrix(q);
  if (s.k > 0) {
    auto w = vector_matrix(q);
    auto wv = w * v;
    for (int a = 1; a <= s.m; ++a)
      for (int b = 1; b <= s.k; ++b)
        out.push_back(make_candidate(wv(b - 1, a - 1), Construction::Pairing, {b, a}, "as defined"));
  }
  if (s.m >= s.n) {
    for (const auto& cols : subsets(s.m, s.n))
      out.push_back(make_candidate(det(columns(v, zero_based(cols))), Construction::DeltaI, cols, "as defined"));
  }
  if (s.k >= s.n) {
    auto w = vector_matrix(q);
    auto all = iota_vec(0, static_cast<std::size_t>(s.n));
    for (const auto& rows : subsets(s.k, s.n)) {
      auto r0 = zero_based(rows);
      auto cand = make_candidate(det(w.submatrix(r0, all)), Construction::DeltaI, rows, "as defined, rows of w");
      cand.from_w = true;
      out.push_back(std::move(cand));
    }
  }
  return out;
}

std::pair<int, int> quotient_remainder(int n, int m) {
  int qq = (n - 1) / m;
  return {qq, n - qq * m};
}

InvariantCandidate build_F_I(const LieAlgebraData& q, const std::vector<int>& subset, std::size_t expansion_cap) {
  const auto& s = q.spec();
  if (s.k != 0 || s.m >= s.n) throw Error("build_F_I: requires k = 0 and m < n");
  auto [qq, r] = quotient_remainder(s.n, s.m);
  check_subset(subset, s.m, static_cast<std::size_t>(r), "build_F_I");
  auto m = F_I_matrix(g_matrix(q), covector_matrix(q), qq, subset);
  // Product of the column sizes bounds the number of products in the expansion.
  double work = 1;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::size_t size = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) size += m(i, j).size();
    work *= static_cast<double>(size);
  }
  if (work > static_cast<double>(expansion_cap))
    throw CapExceeded("expansion", expansion_cap, static_cast<std::size_t>(std::min(work, 1e18)));
  return make_candidate(det(m), Construction::F_I, subset, "as defined (determinant)");
}

PackedPoly build_F_I_packed(const LieAlgebraData& q, const std::vector<int>& subset) {
  const auto& s = q.spec();
  if (s.k != 0 || s.m >= s.n) throw Error("build_F_I_packed: requires k = 0 and m < n");
  auto [qq, r] = quotient_remainder(s.n, s.m);
  check_subset(subset, s.m, static_cast<std::size_t>(r), "build_F_I_packed");
  auto a = g_matrix(q);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= Rational(s.n);
  const unsigned deg_g = static_cast<unsigned>(s.m * qq * (qq - 1) / 2 + qq * r);
  auto layout = PackedPoly::Layout::for_degree(q.dim(), std::max<unsigned>(deg_g, static_cast<unsigned>(s.n)));
  if (!layout) throw CapExceeded("packed variables", 128, q.dim());
  return det_packed(F_I_matrix(a, covector_matrix(q), qq, subset), *layout);
}

std::vector<InvariantCandidate> all_F_I(const LieAlgebraData& q) {
  const auto& s = q.spec();
  auto r = quotient_remainder(s.n, s.m).second;
  std::vector<InvariantCandidate> out;
  for (const auto& sub : subsets(s.m, r)) out.push_back(build_F_I(q, sub));
  return out;
}

Poly restricted_F_I(const LieAlgebraData& q, const std::vector<int>& subset) {
  const auto& s = q.spec();
  if (s.k != 0 || s.m >= s.n) throw Error("restricted_F_I: requires k = 0 and m < n");
  auto [qq, r] = quotient_remainder(s.n, s.m);
  check_subset(subset, s.m, static_cast<std::size_t>(r), "restricted_F_I");
  auto a = g_matrix(q);
  auto lower = iota_vec(s.m, s.n);
  auto a_minus = a.submatrix(lower, iota_vec(0, s.m));
  auto beta = a.submatrix(lower, lower);
  std::vector<PolyMatrix> blocks;
  PolyMatrix power = a_minus;
  for (int i = 0; i + 1 < qq; ++i) {
    blocks.push_back(power);
    power = beta * power;
  }
  blocks.push_back(columns(power, zero_based(subset)));
  return det(hstack(blocks));
}

Poly principal_minor_sum(const PolyMatrix& y, std::size_t i) {
  Poly sum(y.context());
  if (i == 0) return Poly::constant(y.context(), 1);
  for (const auto& sub : subsets(static_cast<int>(y.rows()), static_cast<int>(i)))
    sum += det(y.principal_minor(zero_based(sub)));
  return sum;
}

std::vector<Poly> charpoly_coefficients(const PolyMatrix& y) {
  const std::size_t n = y.rows();
  if (n != y.cols()) throw Error("charpoly_coefficients: matrix not square");
  // Newton's identities: i e_i = sum_{j=1}^{i} (-1)^{j-1} e_{i-j} p_j, p_j = tr(Y^j).
  std::vector<Poly> traces;
  PolyMatrix power = y;
  for (std::size_t j = 1; j <= n; ++j) {
    if (j > 1) power = power * y;
    Poly tr(y.context());
    for (std::size_t i = 0; i < n; ++i) tr += power(i, i);
    traces.push_back(std::move(tr));
  }
  std::vector<Poly> e{Poly::constant(y.context(), 1)};
  for (std::size_t i = 1; i <= n; ++i) {
    Poly acc(y.context());
    for (std::size_t j = 1; j <= i; ++j) {
      Poly t = e[i - j] * traces[j - 1];
      if (j % 2 == 1)
        acc += t;
      else
        acc -= t;
    }
    acc *= make_rational(1, static_cast<long>(i));
    e.push_back(std::move(acc));
  }
  return e;
}

std::vector<InvariantCandidate> charpoly_invariants(const LieAlgebraData& q) {
  const auto& s = q.spec();
  if (s.k == 0 || s.k != s.m || s.m > s.n - 1) throw Error("charpoly_invariants: requires 0 < k = m <= n-1");
  const std::size_t n = s.n, k = s.k, size = n + k;
  auto a = g_matrix(q);
  auto v = covector_matrix(q);
  auto w = vector_matrix(q);
  PolyMatrix y(q.context(), size, size);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y(i, j) = a(i, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) y(i, n + j) = v(i, j);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) y(n + i, j) = w(i, j);
  auto coeffs = charpoly_coefficients(y);
  std::vector<InvariantCandidate> out;
  for (std::size_t i = 2 * k + 1; i <= size; ++i) {
    InvariantCandidate c{coeffs[i], bidegree(coeffs[i]), Construction::CharPoly, {static_cast<int>(i)}, false,
                         "sum of principal minors"};
    out.push_back(std::move(c));
  }
  return out;
}

std::pair<int, int> mixed_d_r(const SemidirectSpec& spec) {
  if (!(0 < spec.k && spec.k < spec.m && spec.m < spec.n)) throw Error("mixed case requires 0 < k < m < n");
  int step = spec.m - spec.k;
  int d = (spec.n - spec.k - 1) / step;
  return {d, spec.n - spec.k - d * step};
}

namespace {

// Validates I for the mixed constructions; returns the subset or nullopt.
std::optional<std::vector<int>> mixed_subset(const SemidirectSpec& s, const std::optional<std::vector<int>>& subset,
                                             const char* what) {
  auto [d, r] = mixed_d_r(s);
  (void)d;
  if (r == s.m - s.k) {
    if (subset) throw Error(std::string(what) + ": subset not used when m - k divides n - m");
    return std::nullopt;
  }
  if (!subset) throw Error(std::string(what) + ": subset of size k + r required");
  check_subset(*subset, s.m, static_cast<std::size_t>(s.k + r), what);
  return subset;
}

}  // namespace

Poly mixed_restricted_F(const LieAlgebraData& q, const std::optional<std::vector<int>>& subset) {
  const auto& s = q.spec();
  auto [d, r] = mixed_d_r(s);
  auto sub = mixed_subset(s, subset, "mixed_restricted_F");
  auto a = g_matrix(q);
  auto lower = iota_vec(s.m, s.n);
  auto u = a.submatrix(lower, iota_vec(s.k, s.m));
  auto beta = a.submatrix(lower, lower);
  std::vector<std::size_t> last_cols = iota_vec(0, s.m - s.k);
  if (sub) {
    for (int i = 1; i <= s.k; ++i)
      if (!std::binary_search(sub->begin(), sub->end(), i)) return Poly(q.context());
    last_cols.clear();
    for (int i : *sub)
      if (i > s.k) last_cols.push_back(static_cast<std::size_t>(i - s.k - 1));
  }
  (void)r;
  std::vector<PolyMatrix> blocks;
  PolyMatrix power = u;
  for (int i = 0; i + 1 < d; ++i) {
    blocks.push_back(power);
    power = beta * power;
  }
  blocks.push_back(columns(power, last_cols));
  return det(hstack(blocks));
}

namespace {

// Basis of Λ^t C^n indexed by bit masks in increasing order.
class Wedge {
 public:
  Wedge(int n, int t) : n_(n) {
    for (const auto& s : subsets(n, t)) {
      std::uint32_t mask = 0;
      for (int i : s) mask |= 1u << (i - 1);
      index_[mask] = masks_.size();
      masks_.push_back(mask);
    }
  }
  std::size_t size() const { return masks_.size(); }
  std::uint32_t mask(std::size_t i) const { return masks_[i]; }
  std::size_t index(std::uint32_t mask) const { return index_.at(mask); }
  int n() const { return n_; }

  // E_ab e_T as (index, sign); sign 0 means zero.
  std::pair<std::size_t, int> apply(int a, int b, std::size_t t) const {
    std::uint32_t m = masks_[t];
    if (!(m >> b & 1u)) return {0, 0};
    if (a == b) return {t, 1};
    if (m >> a & 1u) return {0, 0};
    int lo = std::min(a, b), hi = std::max(a, b);
    std::uint32_t between = m & (((1u << hi) - 1) & ~((1u << (lo + 1)) - 1));
    int sign = (__builtin_popcount(between) % 2) ? -1 : 1;
    return {index((m & ~(1u << b)) | (1u << a)), sign};
  }

 private:
  int n_;
  std::vector<std::uint32_t> masks_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
};

using Weight = std::vector<int>;

// Polynomial image of B acting on a Λ-vector with polynomial coordinates.
std::vector<Poly> act(const Wedge& wedge, const PolyMatrix& b, const std::vector<Poly>& x) {
  std::vector<Poly> out(wedge.size(), Poly(b.context()));
  for (std::size_t t = 0; t < wedge.size(); ++t) {
    if (x[t].is_zero()) continue;
    for (int i = 0; i < wedge.n(); ++i)
      for (int j = 0; j < wedge.n(); ++j) {
        if (b(i, j).is_zero()) continue;
        auto [t2, sign] = wedge.apply(i, j, t);
        if (!sign) continue;
        Poly term = b(i, j) * x[t];
        if (sign > 0)
          out[t2] += term;
        else
          out[t2] -= term;
      }
  }
  return out;
}

// Coordinates of the decomposable vector of the columns `cols` of the n x c matrix m.
std::vector<Poly> wedge_of_columns(const Wedge& wedge, const PolyMatrix& m, const std::vector<std::size_t>& cols) {
  std::vector<Poly> out;
  for (std::size_t t = 0; t < wedge.size(); ++t) {
    std::vector<std::size_t> rows;
    for (int i = 0; i < wedge.n(); ++i)
      if (wedge.mask(t) >> i & 1u) rows.push_back(static_cast<std::size_t>(i));
    out.push_back(det(m.submatrix(rows, cols)));
  }
  return out;
}

// Cartan component V_{d pi_k} inside S^d(Λ^k C^n), realized as polynomials
// in the Plücker variables p_T with one weight space eliminator per weight.
class CartanModule {
 public:
  CartanModule(int n, int k, int d, std::size_t cap) : wedge_(n, k), n_(n) {
    ctx_ = make_context(wedge_.size(), 0);
    enumerate(d, cap);
    std::uint32_t top = (1u << k) - 1;
    Poly hw = pow(Poly::variable(ctx_, wedge_.index(top)), static_cast<unsigned>(d));
    std::vector<Weight> queue{weight_of(hw.leading().mono)};
    add(hw);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      auto& space = spaces_.at(queue[qi]);
      std::vector<Poly> vecs = space.polys;
      for (const auto& p : vecs)
        for (int i = 0; i + 1 < n; ++i) {
          Poly low = derive(i + 1, i, p);
          if (low.is_zero()) continue;
          auto w = weight_of(low.leading().mono);
          bool fresh = spaces_.at(w).polys.empty();
          if (add(low) && fresh) queue.push_back(w);
        }
    }
    for (auto& [w, space] : spaces_) {
      if (space.polys.empty()) continue;
      // Reduced echelon basis for coordinates.
      for (auto& row : space.elim.basis()) {
        std::vector<Term> terms;
        for (auto& [c, val] : row) terms.push_back({space.monos[c], val});
        space.basis_index.push_back(basis_.size());
        space.pivots.push_back(row.front().first);
        basis_.push_back(Poly::from_terms(ctx_, std::move(terms)));
        basis_weight_.push_back(w);
      }
    }
  }

  const ContextPtr& context() const { return ctx_; }
  std::size_t dim() const { return basis_.size(); }
  const Poly& basis(std::size_t a) const { return basis_[a]; }
  const Weight& weight(std::size_t a) const { return basis_weight_[a]; }
  bool has_weight(const Weight& w) const {
    auto it = spaces_.find(w);
    return it != spaces_.end() && !it->second.basis_index.empty();
  }
  const std::vector<std::size_t>& basis_of_weight(const Weight& w) const { return spaces_.at(w).basis_index; }

  // E_ab as a derivation of S(Λ^k).
  Poly derive(int a, int b, const Poly& p) const {
    Poly out(ctx_);
    for (std::size_t t = 0; t < wedge_.size(); ++t) {
      auto [t2, sign] = wedge_.apply(a, b, t);
      if (!sign) continue;
      Poly dp = partial_derivative(p, t);
      if (dp.is_zero()) continue;
      out += Rational(sign) * Poly::variable(ctx_, t2) * dp;
    }
    return out;
  }

  // Coordinates of a module element in the echelon basis.
  SparseVector coordinates(const Poly& p) const {
    SparseVector out;
    if (p.is_zero()) return out;
    const auto& space = spaces_.at(weight_of(p.leading().mono));
    SparseRow row;
    for (const auto& t : p.terms()) row.emplace_back(space.col_index.at(t.mono), t.coeff);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < space.pivots.size(); ++i) {
      auto it = std::lower_bound(row.begin(), row.end(), space.pivots[i],
                                 [](const auto& e, std::size_t c) { return e.first < c; });
      if (it != row.end() && it->first == space.pivots[i]) out.emplace_back(space.basis_index[i], it->second);
    }
    return out;
  }

  Weight weight_of(const Monomial& m) const {
    Weight w(n_, 0);
    for (const auto& f : m.factors())
      for (int i = 0; i < n_; ++i)
        if (wedge_.mask(f.var) >> i & 1u) w[i] += f.exp;
    return w;
  }

 private:
  struct Space {
    std::vector<Monomial> monos;
    std::unordered_map<Monomial, std::size_t, MonomialHash> col_index;
    SparseEliminator elim{0};
    std::vector<Poly> polys;
    std::vector<std::size_t> basis_index;
    std::vector<std::size_t> pivots;
  };

  void enumerate(int d, std::size_t cap) {
    std::vector<std::vector<Monomial>> by_degree{{Monomial()}};
    std::size_t vars = wedge_.size();
    std::vector<Monomial> all;
    std::function<void(std::size_t, int, Monomial)> rec = [&](std::size_t from, int left, Monomial m) {
      if (left == 0) {
        all.push_back(m);
        if (all.size() > cap) throw CapExceeded("tensor", cap, all.size());
        return;
      }
      for (std::size_t v = from; v < vars; ++v) rec(v, left - 1, m * Monomial::variable(v));
    };
    rec(0, d, Monomial());
    for (auto& m : all) {
      auto& space = spaces_[weight_of(m)];
      space.col_index[m] = space.monos.size();
      space.monos.push_back(m);
    }
    for (auto& [w, space] : spaces_) space.elim = SparseEliminator(space.monos.size());
  }

  bool add(const Poly& p) {
    auto& space = spaces_.at(weight_of(p.leading().mono));
    SparseRow row;
    for (const auto& t : p.terms()) row.emplace_back(space.col_index.at(t.mono), t.coeff);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    if (!space.elim.add_row(std::move(row))) return false;
    space.polys.push_back(p);
    return true;
  }

  Wedge wedge_;
  int n_;
  ContextPtr ctx_;
  std::map<Weight, Space> spaces_;
  std::vector<Poly> basis_;
  std::vector<Weight> basis_weight_;
};

// Σ coeff Π images[var]^exp, images in a different context.
Poly evaluate_in(const Poly& p, const std::vector<Poly>& images, const ContextPtr& target) {
  Poly out(target);
  std::map<std::pair<std::size_t, unsigned>, Poly> powers;
  for (const auto& t : p.terms()) {
    Poly term = Poly::constant(target, t.coeff);
    for (const auto& f : t.mono.factors()) {
      auto key = std::make_pair(static_cast<std::size_t>(f.var), static_cast<unsigned>(f.exp));
      auto it = powers.find(key);
      if (it == powers.end()) it = powers.emplace(key, pow(images[f.var], f.exp)).first;
      term *= it->second;
    }
    out += term;
  }
  return out;
}

}  // namespace

InvariantCandidate global_mixed_F(const LieAlgebraData& q, const std::optional<std::vector<int>>& subset,
                                  std::size_t tensor_cap, MixedGlobalInfo* info) {
  const auto& s = q.spec();
  auto [d, r] = mixed_d_r(s);
  auto sub = mixed_subset(s, subset, "global_mixed_F");
  const int n = s.n;

  // Tensor factors: d copies of Λ^m, then Λ^{k+r}.
  std::vector<Wedge> factors;
  for (int i = 0; i < d; ++i) factors.emplace_back(n, s.m);
  factors.emplace_back(n, s.k + r);
  std::size_t wdim = 1;
  for (const auto& f : factors) {
    if (wdim > tensor_cap / f.size() + 1) throw CapExceeded("tensor", tensor_cap, wdim * f.size());
    wdim *= f.size();
  }
  if (wdim > tensor_cap) throw CapExceeded("tensor", tensor_cap, wdim);

  CartanModule module(n, s.k, d, tensor_cap);

  auto decode = [&](std::size_t b) {
    std::vector<std::size_t> parts(factors.size());
    for (std::size_t f = factors.size(); f-- > 0;) {
      parts[f] = b % factors[f].size();
      b /= factors[f].size();
    }
    return parts;
  };
  auto encode = [&](const std::vector<std::size_t>& parts) {
    std::size_t b = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) b = b * factors[f].size() + parts[f];
    return b;
  };
  // Weight of a tensor basis element shifted by the all-ones vector, i.e. as a
  // weight of S^d(Λ^k).
  auto shifted_weight = [&](std::size_t b) {
    Weight w(n, -1);
    auto parts = decode(b);
    for (std::size_t f = 0; f < factors.size(); ++f)
      for (int i = 0; i < n; ++i)
        if (factors[f].mask(parts[f]) >> i & 1u) ++w[i];
    return w;
  };

  std::vector<Weight> wweights(wdim);
  for (std::size_t b = 0; b < wdim; ++b) wweights[b] = shifted_weight(b);

  // Unknowns T(a, b) with matching weights.
  std::unordered_map<std::uint64_t, std::size_t> unknown;
  std::vector<std::pair<std::size_t, std::size_t>> unknown_list;
  for (std::size_t b = 0; b < wdim; ++b) {
    if (!module.has_weight(wweights[b])) continue;
    for (auto a : module.basis_of_weight(wweights[b])) {
      unknown[static_cast<std::uint64_t>(a) * wdim + b] = unknown_list.size();
      unknown_list.emplace_back(a, b);
    }
  }
  auto find_unknown = [&](std::size_t a, std::size_t b) -> std::optional<std::size_t> {
    auto it = unknown.find(static_cast<std::uint64_t>(a) * wdim + b);
    if (it == unknown.end()) return std::nullopt;
    return it->second;
  };

  SparseEliminator elim(unknown_list.size());
  for (int i = 0; i + 1 < n; ++i) {
    for (int dir = 0; dir < 2; ++dir) {
      int ea = dir == 0 ? i : i + 1, eb = dir == 0 ? i + 1 : i;
      // Action of E_{ea,eb} on the module basis.
      std::vector<SparseVector> on_module(module.dim());
      for (std::size_t a = 0; a < module.dim(); ++a) on_module[a] = module.coordinates(module.derive(ea, eb, module.basis(a)));
      for (std::size_t c = 0; c < wdim; ++c) {
        Weight target = wweights[c];
        target[ea] += 1;
        target[eb] -= 1;
        if (!module.has_weight(target)) continue;
        // E·c in the tensor basis.
        std::map<std::size_t, Rational> image;
        auto parts = decode(c);
        for (std::size_t f = 0; f < factors.size(); ++f) {
          auto [t2, sign] = factors[f].apply(ea, eb, parts[f]);
          if (!sign) continue;
          auto p2 = parts;
          p2[f] = t2;
          image[encode(p2)] += sign;
        }
        for (auto a : module.basis_of_weight(target)) {
          std::map<std::size_t, Rational> row;
          for (const auto& [b, coef] : image) {
            if (coef == 0) continue;
            if (auto u = find_unknown(a, b)) row[*u] += coef;
          }
          if (module.has_weight(wweights[c])) {
            for (auto a2 : module.basis_of_weight(wweights[c]))
              for (const auto& [a3, coef] : on_module[a2])
                if (a3 == a)
                  if (auto u = find_unknown(a2, c)) row[*u] -= coef;
          }
          SparseRow sr;
          for (auto& [col, val] : row)
            if (val != 0) sr.emplace_back(col, val);
          if (!sr.empty()) elim.add_row(std::move(sr));
        }
      }
    }
  }
  auto kern = elim.kernel();
  if (info) {
    info->tensor_dim = wdim;
    info->module_dim = module.dim();
    info->unknowns = unknown_list.size();
    info->solution_dim = kern.size();
  }
  if (kern.size() != 1)
    throw Error("global_mixed_F: equivariant solution space has dimension " + std::to_string(kern.size()));

  // G_b = Σ_a T(a, b) · (basis a evaluated at the k x k minors of w).
  auto w = vector_matrix(q);
  Wedge wk(n, s.k);
  std::vector<Poly> minors;
  auto wrows = iota_vec(0, s.k);
  for (std::size_t t = 0; t < wk.size(); ++t) {
    std::vector<std::size_t> cols;
    for (int i = 0; i < n; ++i)
      if (wk.mask(t) >> i & 1u) cols.push_back(static_cast<std::size_t>(i));
    minors.push_back(det(w.submatrix(wrows, cols)));
  }
  std::vector<std::optional<Poly>> evaluated(module.dim());
  std::map<std::size_t, Poly> g_of;
  for (const auto& [col, val] : kern.front()) {
    auto [a, b] = unknown_list[col];
    if (!evaluated[a]) evaluated[a] = evaluate_in(module.basis(a), minors, q.context());
    auto it = g_of.try_emplace(b, Poly(q.context())).first;
    it->second += val * *evaluated[a];
  }

  // Tensor factors in the coordinates of q.
  auto a = g_matrix(q);
  auto v = covector_matrix(q);
  auto all_cols = iota_vec(0, s.m);
  std::vector<std::vector<Poly>> tensor;
  PolyMatrix power = a;
  for (int f = 0; f < d; ++f) {
    auto x = wedge_of_columns(factors[f], v, all_cols);
    if (f > 0) {
      for (int rep = 0; rep < s.m - s.k; ++rep) x = act(factors[f], power, x);
      power = power * a;
    }
    tensor.push_back(std::move(x));
  }
  {
    std::vector<std::size_t> cols = sub ? zero_based(*sub) : all_cols;
    auto x = wedge_of_columns(factors[d], v, cols);
    for (int rep = 0; rep < r; ++rep) x = act(factors[d], power, x);
    tensor.push_back(std::move(x));
  }

  // Contract from the outermost factor; prefixes without a nonzero G are skipped.
  std::vector<std::unordered_set<std::size_t>> live(factors.size() + 1);
  for (const auto& [b, g] : g_of) {
    if (g.is_zero()) continue;
    auto parts = decode(b);
    std::size_t prefix = 0;
    live[0].insert(0);
    for (std::size_t f = 0; f < factors.size(); ++f) {
      prefix = prefix * factors[f].size() + parts[f];
      live[f + 1].insert(prefix);
    }
  }
  std::function<Poly(std::size_t, std::size_t)> contract = [&](std::size_t level, std::size_t prefix) -> Poly {
    if (level == factors.size()) return g_of.at(prefix);
    Poly acc(q.context());
    for (std::size_t t = 0; t < factors[level].size(); ++t) {
      std::size_t next = prefix * factors[level].size() + t;
      if (!live[level + 1].count(next) || tensor[level][t].is_zero()) continue;
      acc += tensor[level][t] * contract(level + 1, next);
    }
    return acc;
  };
  Poly f = normalize(contract(0, 0));
  if (f.is_zero()) throw Error("global_mixed_F: the contraction vanished identically");
  auto out = make_candidate(std::move(f), Construction::MixedGlobal, sub ? *sub : std::vector<int>{},
                            "integer content 1, positive leading coefficient");
  if (d >= 2) {
    // Paths of A^s through e_1..e_k survive the contraction (entries A_{ij} with
    // j <= k < i > m), so the result is SL_n-invariant but not V-invariant.
    out.expected_invariant = false;
    out.normalization += "; d >= 2: not V-invariant";
  }
  return out;
}

namespace {

Weight variable_weight(const LieAlgebraData& q, std::size_t var) {
  Weight w(q.spec().n, 0);
  const auto& l = q.labels()[var];
  switch (l.kind) {
    case BasisKind::E:
      w[l.i - 1] += 1;
      w[l.j - 1] -= 1;
      break;
    case BasisKind::H: break;
    case BasisKind::Covector: w[l.j - 1] -= 1; break;
    case BasisKind::Vector: w[l.j - 1] += 1; break;
  }
  return w;
}

// Monomials of degree `deg` in variables [from, to), grouped by weight.
std::map<Weight, std::vector<Monomial>> monomials_by_weight(const LieAlgebraData& q, std::size_t from, std::size_t to,
                                                            unsigned deg, std::size_t cap) {
  std::map<Weight, std::vector<Monomial>> out;
  // C(vars + deg - 1, deg) monomials, saturating.
  std::size_t total = 1;
  const std::size_t vars = to - from;
  for (unsigned i = 1; i <= deg && vars > 0; ++i) {
    const std::size_t f = vars + i - 1;
    if (total > std::numeric_limits<std::size_t>::max() / f) {
      total = std::numeric_limits<std::size_t>::max();
      break;
    }
    total = total * f / i;
  }
  if (total > cap) throw CapExceeded("finder", cap, total);
  std::vector<Weight> vw;
  for (std::size_t v = from; v < to; ++v) vw.push_back(variable_weight(q, v));
  Weight cur(q.spec().n, 0);
  std::function<void(std::size_t, unsigned, const Monomial&)> rec = [&](std::size_t v, unsigned left,
                                                                         const Monomial& m) {
    if (left == 0) {
      out[cur].push_back(m);
      return;
    }
    for (std::size_t u = v; u < to; ++u) {
      for (std::size_t i = 0; i < cur.size(); ++i) cur[i] += vw[u - from][i];
      rec(u, left - 1, m * Monomial::variable(u));
      for (std::size_t i = 0; i < cur.size(); ++i) cur[i] -= vw[u - from][i];
    }
  };
  rec(from, deg, Monomial());
  return out;
}

bool constant_weight(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [&](int x) { return x == w.front(); });
}

}  // namespace

std::vector<InvariantCandidate> invariant_finder(const LieAlgebraData& q, Bidegree slice, std::size_t slice_cap) {
  auto g_part = monomials_by_weight(q, 0, q.dim_g(), slice.g, slice_cap);
  auto v_part = monomials_by_weight(q, q.dim_g(), q.dim(), slice.v, slice_cap);
  // Invariants are killed by the Cartan derivations, so only monomials whose
  // weight is a multiple of the all-ones vector (zero for sl_n) can occur.
  std::vector<std::pair<const std::vector<Monomial>*, const std::vector<Monomial>*>> blocks;
  std::size_t slice_size = 0;
  for (const auto& [wg, gm] : g_part)
    for (const auto& [wv, vm] : v_part) {
      Weight sum(wg.size());
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = wg[i] + wv[i];
      if (!constant_weight(sum)) continue;
      blocks.emplace_back(&gm, &vm);
      slice_size += gm.size() * vm.size();
    }
  if (slice_size > slice_cap) throw CapExceeded("finder", slice_cap, slice_size);
  std::vector<Monomial> cols;
  cols.reserve(slice_size);
  for (const auto& [gm, vm] : blocks)
    for (const auto& a : *gm)
      for (const auto& b : *vm) cols.push_back(a * b);
  std::sort(cols.begin(), cols.end(), [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) > 0; });

  SparseEliminator elim(cols.size());
  for (std::size_t i = 0; i < q.dim(); ++i) {
    if (q.labels()[i].kind == BasisKind::H) continue;
    std::unordered_map<Monomial, SparseRow, MonomialHash> rows;
    std::vector<Monomial> order;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      Poly image = lie_derivative(q, i, Poly::monomial(q.context(), cols[c]));
      for (const auto& t : image.terms()) {
        auto [it, fresh] = rows.try_emplace(t.mono);
        if (fresh) order.push_back(t.mono);
        it->second.emplace_back(c, t.coeff);
      }
    }
    for (const auto& m : order) elim.add_row(std::move(rows.at(m)));
  }
  std::vector<InvariantCandidate> out;
  for (const auto& vec : elim.kernel()) {
    std::vector<Term> terms;
    for (const auto& [c, val] : vec) terms.push_back({cols[c], val});
    Poly p = normalize(Poly::from_terms(q.context(), std::move(terms)));
    out.push_back(make_candidate(std::move(p), Construction::FinderSolution, {},
                                 "integer content 1, positive leading coefficient"));
  }
  return out;
}

bool in_span(const Poly& f, const std::vector<InvariantCandidate>& basis) {
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  auto to_row = [&](const Poly& p) {
    SparseRow row;
    for (const auto& t : p.terms()) {
      auto [it, fresh] = index.try_emplace(t.mono, index.size());
      row.emplace_back(it->second, t.coeff);
    }
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return row;
  };
  std::vector<SparseRow> rows;
  for (const auto& c : basis) rows.push_back(to_row(c.poly));
  SparseRow target = to_row(f);
  SparseEliminator elim(index.size());
  for (auto& r : rows) elim.add_row(std::move(r));
  return elim.reduce(std::move(target)).empty();
}

}  // namespace qinv
