#include "qinv/gcd.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace qinv {

namespace {

// Combined size from which the line test runs, and per-input size from which
// sparse interpolation is tried before the subresultant route.
constexpr std::size_t kLineTestSize = 24;
constexpr std::size_t kSparseSize = 16;

// Polynomial in one main variable with coefficients free of it; index = degree.
using Univariate = std::vector<Poly>;

Univariate to_univariate(const Poly& p, std::size_t var) {
  std::map<unsigned, std::vector<Term>> parts;
  for (const auto& t : p.terms()) parts[t.mono.exponent(var)].push_back({t.mono.without(var), t.coeff});
  Univariate out(parts.empty() ? 1 : parts.rbegin()->first + 1, Poly(p.context()));
  // Removing one variable preserves grevlex order only within equal exponents
  // of that variable, which is how the parts were collected.
  for (auto& [e, terms] : parts) out[e] = Poly::from_terms(p.context(), std::move(terms));
  return out;
}

Poly from_univariate(const Univariate& u, std::size_t var) {
  Poly out(u.front().context());
  for (std::size_t e = 0; e < u.size(); ++e)
    if (!u[e].is_zero()) out += mul_monomial(u[e], Monomial::variable(var, static_cast<unsigned>(e)), 1);
  return out;
}

void trim(Univariate& u) {
  while (u.size() > 1 && u.back().is_zero()) u.pop_back();
}

std::size_t degree(const Univariate& u) { return u.size() - 1; }
bool is_zero(const Univariate& u) { return u.size() == 1 && u[0].is_zero(); }

// lc(b)^(deg a - deg b + 1) * a mod b.
Univariate pseudo_remainder(Univariate a, const Univariate& b) {
  const std::size_t db = degree(b);
  const Poly& lb = b.back();
  std::size_t steps = degree(a) - db + 1;
  while (!is_zero(a) && degree(a) >= db) {
    Poly la = a.back();
    const std::size_t shift = degree(a) - db;
    for (auto& c : a) c *= lb;
    for (std::size_t i = 0; i <= db; ++i)
      if (!b[i].is_zero()) a[i + shift] -= la * b[i];
    a.back() = Poly(a.back().context());
    trim(a);
    --steps;
  }
  if (steps > 0) {
    Poly f = pow(lb, static_cast<unsigned>(steps));
    for (auto& c : a) c *= f;
  }
  return a;
}

Poly gcd_rec(const Poly& a, const Poly& b);

Poly one_like(const Poly& p) { return Poly::constant(p.context(), 1); }

// Content with respect to the main variable: gcd of the coefficients,
// smallest first.
Poly content(const Univariate& u) {
  std::vector<const Poly*> coeffs;
  for (const auto& c : u)
    if (!c.is_zero()) coeffs.push_back(&c);
  std::sort(coeffs.begin(), coeffs.end(), [](const Poly* x, const Poly* y) { return x->size() < y->size(); });
  Poly g = normalize(*coeffs.front());
  for (std::size_t i = 1; i < coeffs.size() && !g.is_constant(); ++i) g = gcd_rec(g, *coeffs[i]);
  return g;
}

Univariate divide_coeffs(const Univariate& u, const Poly& d) {
  Univariate out;
  out.reserve(u.size());
  for (const auto& c : u) out.push_back(c.is_zero() ? c : divide_or_throw(c, d));
  return out;
}

// Subresultant PRS on primitive inputs; returns the primitive part of the
// last nonzero remainder (the gcd up to a unit).
Univariate subresultant_gcd(Univariate a, Univariate b) {
  if (degree(a) < degree(b)) std::swap(a, b);
  Poly g = one_like(a[0]);
  Poly h = one_like(a[0]);
  while (true) {
    if (degree(b) == 0) return Univariate{one_like(a[0])};
    const std::size_t delta = degree(a) - degree(b);
    Univariate r = pseudo_remainder(a, b);
    if (is_zero(r)) {
      Poly c = content(b);
      return c.is_constant() ? b : divide_coeffs(b, c);
    }
    a = std::move(b);
    Poly denom = g * pow(h, static_cast<unsigned>(delta));
    b = divide_coeffs(r, denom);
    g = a.back();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = divide_or_throw(pow(g, static_cast<unsigned>(delta)), pow(h, static_cast<unsigned>(delta - 1)));
    }
  }
}

Poly gcd_rec(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalize(b);
  if (b.is_zero()) return normalize(a);
  if (a.is_constant() || b.is_constant()) return one_like(a);

  // Monomial content.
  Monomial ma = a.terms().front().mono, mb = b.terms().front().mono;
  for (const auto& t : a.terms()) ma = ma.gcd(t.mono);
  for (const auto& t : b.terms()) mb = mb.gcd(t.mono);
  if (!ma.is_one() || !mb.is_one()) {
    Poly ra = ma.is_one() ? a : divide_or_throw(a, Poly::monomial(a.context(), ma));
    Poly rb = mb.is_one() ? b : divide_or_throw(b, Poly::monomial(b.context(), mb));
    return mul_monomial(gcd_rec(ra, rb), ma.gcd(mb), 1);
  }

  const auto va = a.variables(), vb = b.variables();
  // A variable occurring in only one input cannot occur in the gcd: fold the
  // other input over the coefficients with respect to that variable.
  for (const auto* pair : {&va, &vb}) {
    const auto& mine = *pair;
    const auto& other = pair == &va ? vb : va;
    const Poly& p = pair == &va ? a : b;
    const Poly& q = pair == &va ? b : a;
    for (std::size_t v : mine) {
      if (std::binary_search(other.begin(), other.end(), v)) continue;
      Univariate u = to_univariate(p, v);
      std::vector<const Poly*> coeffs;
      for (const auto& c : u)
        if (!c.is_zero()) coeffs.push_back(&c);
      std::sort(coeffs.begin(), coeffs.end(), [](const Poly* x, const Poly* y) { return x->size() < y->size(); });
      Poly g = normalize(q);
      for (const Poly* c : coeffs) {
        g = gcd_rec(g, *c);
        if (g.is_constant()) break;
      }
      return g;
    }
  }

  // Divisibility shortcut.
  if (a.size() <= b.size()) {
    if (divide_exact(b, a)) return normalize(a);
  } else if (divide_exact(a, b)) {
    return normalize(b);
  }

  // Large inputs: certified coprimality from one line, then sparse interpolation.
  if (a.size() + b.size() >= kLineTestSize) {
    auto bound = gcd_degree_bound(a, b);
    if (bound && *bound == 0) return one_like(a);
    if (std::min(a.size(), b.size()) >= kSparseSize) {
      for (std::uint64_t seed = 0; seed < 3; ++seed)
        if (auto g = gcd_sparse(a, b, seed)) return *g;
    }
  }

  // Main variable: smallest maximal degree.
  std::size_t var = va.front();
  unsigned best = ~0u;
  for (std::size_t v : va) {
    unsigned d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best) {
      best = d;
      var = v;
    }
  }
  Univariate ua = to_univariate(a, var), ub = to_univariate(b, var);
  Poly ca = content(ua), cb = content(ub);
  Poly c = gcd_rec(ca, cb);
  if (!ca.is_constant()) ua = divide_coeffs(ua, ca);
  if (!cb.is_constant()) ub = divide_coeffs(ub, cb);
  Univariate g = subresultant_gcd(std::move(ua), std::move(ub));
  Poly prim = from_univariate(g, var);
  return normalize(c * prim);
}

}  // namespace

Poly gcd_multi(const Poly& a, const Poly& b) {
  if (!same_context(a.context(), b.context())) throw Error("gcd: context mismatch");
  Poly g = gcd_rec(a, b);
  if (g.is_zero()) return g;
  if (!divide_exact(a, g) || !divide_exact(b, g)) throw Error("gcd: result does not divide the inputs");
  return g;
}

Poly gcd_all(std::span<const Poly> polys) {
  if (polys.empty()) throw Error("gcd_all: empty list");
  Poly g = normalize(polys.front());
  for (std::size_t i = 1; i < polys.size(); ++i) {
    if (!g.is_zero() && g.is_constant()) break;
    g = gcd_multi(g, polys[i]);
  }
  return g;
}

}  // namespace qinv
