#include <algorithm>
#include <random>

#include "modp.hpp"
#include "qinv/gcd.hpp"

namespace qinv {

namespace {

using namespace modp;

// Polynomial reduced modulo kP, kept as a flat term list for fast evaluation.
struct ModPoly {
  std::vector<u64> coeff;
  std::vector<std::uint32_t> start;  // factor range of term i: [start[i], start[i+1])
  std::vector<Factor> factors;
  unsigned degree = 0;
  std::vector<unsigned> max_exp;  // per variable
};

std::optional<ModPoly> to_mod(const Poly& p) {
  ModPoly out;
  out.max_exp.assign(p.context()->size(), 0);
  out.start.push_back(0);
  for (const auto& t : p.terms()) {
    auto c = modp::to_mod(t.coeff);
    if (!c) return std::nullopt;
    out.coeff.push_back(*c);
    for (const auto& f : t.mono.factors()) {
      out.factors.push_back(f);
      out.max_exp[f.var] = std::max<unsigned>(out.max_exp[f.var], f.exp);
    }
    out.start.push_back(static_cast<std::uint32_t>(out.factors.size()));
  }
  out.degree = p.total_degree();
  return out;
}

u64 evaluate(const ModPoly& p, const std::vector<std::vector<u64>>& powers) {
  u64 sum = 0;
  for (std::size_t i = 0; i < p.coeff.size(); ++i) {
    u64 v = p.coeff[i];
    for (std::uint32_t j = p.start[i]; j < p.start[i + 1]; ++j) v = mulm(v, powers[p.factors[j].var][p.factors[j].exp]);
    sum = addm(sum, v);
  }
  return sum;
}

void fill_powers(const ModPoly& p, const std::vector<u64>& point, std::vector<std::vector<u64>>& powers) {
  powers.resize(point.size());
  for (std::size_t v = 0; v < point.size(); ++v) {
    powers[v].resize(p.max_exp[v] + 1);
    if (p.max_exp[v] == 0) continue;
    powers[v][0] = 1;
    for (unsigned e = 1; e <= p.max_exp[v]; ++e) powers[v][e] = mulm(powers[v][e - 1], point[v]);
  }
}

// Restriction of p to the line y + t b as a polynomial in t.
UPoly restrict_to_line(const ModPoly& p, const std::vector<u64>& y, const std::vector<u64>& b) {
  std::vector<u64> nodes, values;
  std::vector<std::vector<u64>> powers;
  std::vector<u64> point(y.size());
  for (unsigned t = 0; t <= p.degree; ++t) {
    for (std::size_t v = 0; v < y.size(); ++v) point[v] = addm(y[v], mulm(t, b[v]));
    fill_powers(p, point, powers);
    nodes.push_back(t);
    values.push_back(evaluate(p, powers));
  }
  auto out = interpolate(nodes, values);
  trim(out);
  return out;
}

// Solves sum_k c_k m_k^s = v_s, s = 0..T-1, for distinct nonzero m_k.
std::vector<u64> solve_vandermonde(const std::vector<u64>& m, const std::vector<u64>& v) {
  const std::size_t t = m.size();
  UPoly master{1};
  for (u64 mk : m) {
    UPoly next(master.size() + 1, 0);
    for (std::size_t i = 0; i < master.size(); ++i) {
      next[i + 1] = addm(next[i + 1], master[i]);
      next[i] = subm(next[i], mulm(master[i], mk));
    }
    master = std::move(next);
  }
  std::vector<u64> c(t);
  UPoly quot(t);
  for (std::size_t k = 0; k < t; ++k) {
    // master / (z - m_k) by synthetic division.
    u64 carry = master[t];
    for (std::size_t i = t; i-- > 0;) {
      quot[i] = carry;
      carry = addm(master[i], mulm(carry, m[k]));
    }
    u64 num = 0, den = 0, pw = 1;
    for (std::size_t s = 0; s < t; ++s) {
      num = addm(num, mulm(quot[s], v[s]));
      den = addm(den, mulm(quot[s], pw));
      pw = mulm(pw, m[k]);
    }
    c[k] = mulm(num, invm(den));
  }
  return c;
}

std::optional<Rational> reconstruct(u64 u) {
  using i128 = __int128;
  const i128 bound = i128(1) << 30;
  i128 r0 = kP, r1 = u, t0 = 0, t1 = 1;
  while (r1 >= bound) {
    i128 q = r0 / r1;
    i128 r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || t1 >= bound || -t1 >= bound) return std::nullopt;
  Rational out(static_cast<long>(r1), static_cast<long>(t1 < 0 ? -t1 : t1));
  if (t1 < 0) out = -out;
  out.canonicalize();
  return out;
}

class LineGcd {
 public:
  LineGcd(const ModPoly& a, const ModPoly& b, std::vector<u64> direction)
      : a_(a), b_(b), dir_(std::move(direction)) {}

  // Monic gcd of the restrictions to the line through y; nullopt when a
  // restriction loses degree.
  std::optional<UPoly> at(const std::vector<u64>& y) const {
    auto ua = restrict_to_line(a_, y, dir_);
    auto ub = restrict_to_line(b_, y, dir_);
    if (ua.size() != a_.degree + 1 || ub.size() != b_.degree + 1) return std::nullopt;
    return monic_gcd(std::move(ua), std::move(ub));
  }

 private:
  const ModPoly& a_;
  const ModPoly& b_;
  std::vector<u64> dir_;
};

}  // namespace

struct LineGcdBound::State {
  std::vector<u64> y, dir;
  UPoly running;
  bool anchored = false;  // some added input kept its degree on the line
  bool any = false;
};

LineGcdBound::LineGcdBound(std::size_t num_vars, std::uint64_t seed) : state_(std::make_shared<State>()) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 41);
  state_->y.resize(num_vars);
  state_->dir.resize(num_vars);
  for (auto& x : state_->y) x = random_unit(rng);
  for (auto& x : state_->dir) x = random_unit(rng);
}

void LineGcdBound::add(const Poly& p) {
  if (p.is_zero()) return;
  auto mp = to_mod(normalize(p));
  if (!mp) return;
  auto u = restrict_to_line(*mp, state_->y, state_->dir);
  if (u.size() == mp->degree + 1) state_->anchored = true;
  state_->running = state_->any ? monic_gcd(std::move(state_->running), std::move(u)) : monic_gcd(std::move(u), {});
  state_->any = true;
}

std::optional<unsigned> LineGcdBound::degree() const {
  if (!state_->anchored || state_->running.empty()) return std::nullopt;
  return static_cast<unsigned>(state_->running.size() - 1);
}

std::optional<unsigned> gcd_degree_bound(const Poly& a, const Poly& b, std::uint64_t seed) {
  auto ma = to_mod(normalize(a)), mb = to_mod(normalize(b));
  if (!ma || !mb) return std::nullopt;
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  const std::size_t n = a.context()->size();
  std::vector<u64> y(n), dir(n);
  for (auto& x : y) x = random_unit(rng);
  for (auto& x : dir) x = random_unit(rng);
  LineGcd line(*ma, *mb, dir);
  auto g = line.at(y);
  if (!g) return std::nullopt;
  return static_cast<unsigned>(g->size() - 1);
}

std::optional<Poly> gcd_sparse(const Poly& a_in, const Poly& b_in, std::uint64_t seed) {
  const Poly a = normalize(a_in), b = normalize(b_in);
  auto ma = to_mod(a), mb = to_mod(b);
  if (!ma || !mb) return std::nullopt;
  const auto& ctx = a.context();
  const std::size_t n = ctx->size();
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 29);
  std::vector<u64> dir(n), anchor(n);
  for (auto& x : dir) x = random_unit(rng);
  for (auto& x : anchor) x = random_unit(rng);
  LineGcd line(*ma, *mb, dir);
  auto g0 = line.at(anchor);
  if (!g0) return std::nullopt;
  const unsigned degree = static_cast<unsigned>(g0->size() - 1);
  if (degree == 0) return Poly::constant(ctx, 1);

  // Values of gcd / gcd(dir) at a point: constant term of the monic line gcd.
  auto value = [&](const std::vector<u64>& y) -> std::optional<u64> {
    auto g = line.at(y);
    if (!g || g->size() != degree + 1) return std::nullopt;
    return (*g)[0];
  };

  // Degree of the gcd in each variable from the gcd of the restrictions to
  // the axis through the anchor. A low estimate only loses terms, which the
  // final division check rejects.
  std::vector<std::size_t> vars;
  std::vector<unsigned> bounds;
  for (std::size_t v = 0; v < n; ++v) {
    unsigned d = std::min({ma->max_exp[v], mb->max_exp[v], degree});
    if (d == 0) continue;
    std::vector<u64> axis(n, 0);
    axis[v] = 1;
    auto ua = restrict_to_line(*ma, anchor, axis), ub = restrict_to_line(*mb, anchor, axis);
    if (ua.size() == ma->max_exp[v] + 1u && ub.size() == mb->max_exp[v] + 1u)
      d = std::min(d, static_cast<unsigned>(monic_gcd(std::move(ua), std::move(ub)).size() - 1));
    if (d > 0) {
      vars.push_back(v);
      bounds.push_back(d);
    }
  }
  if (vars.empty()) return std::nullopt;

  struct Entry {
    std::vector<unsigned> exps;  // over vars[0..j)
    u64 coeff;
  };
  std::vector<Entry> skeleton;

  // First variable: dense interpolation.
  {
    std::vector<u64> nodes, values;
    auto point = anchor;
    for (unsigned i = 0; i <= bounds[0]; ++i) {
      u64 node = i == 0 ? anchor[vars[0]] : random_unit(rng);
      point[vars[0]] = node;
      auto v = value(point);
      if (!v) return std::nullopt;
      nodes.push_back(node);
      values.push_back(*v);
    }
    auto coeffs = interpolate(nodes, values);
    for (unsigned e = 0; e < coeffs.size(); ++e)
      if (coeffs[e]) skeleton.push_back({{e}, coeffs[e]});
  }

  for (std::size_t j = 1; j < vars.size(); ++j) {
    const std::size_t t = skeleton.size();
    // Monomial images at a random point for the processed variables.
    std::vector<u64> r(j), images(t);
    bool distinct = false;
    for (int attempt = 0; attempt < 4 && !distinct; ++attempt) {
      for (auto& x : r) x = random_unit(rng);
      for (std::size_t k = 0; k < t; ++k) {
        u64 m = 1;
        for (std::size_t i = 0; i < j; ++i) m = mulm(m, powm(r[i], skeleton[k].exps[i]));
        images[k] = m;
      }
      auto sorted = images;
      std::sort(sorted.begin(), sorted.end());
      distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    }
    if (!distinct) return std::nullopt;

    std::vector<u64> nodes{anchor[vars[j]]};
    std::vector<std::vector<u64>> coeff_values{std::vector<u64>(t)};
    for (std::size_t k = 0; k < t; ++k) coeff_values[0][k] = skeleton[k].coeff;
    for (unsigned l = 1; l <= bounds[j]; ++l) {
      u64 node = random_unit(rng);
      std::vector<u64> vals(t);
      auto point = anchor;
      point[vars[j]] = node;
      // Powers start at r^1: the all-ones point is degenerate for matrices of
      // coordinates.
      std::vector<u64> rp = r;
      for (std::size_t s = 0; s < t; ++s) {
        for (std::size_t i = 0; i < j; ++i) point[vars[i]] = rp[i];
        auto v = value(point);
        if (!v) return std::nullopt;
        vals[s] = *v;
        for (std::size_t i = 0; i < j; ++i) rp[i] = mulm(rp[i], r[i]);
      }
      nodes.push_back(node);
      auto solved = solve_vandermonde(images, vals);
      for (std::size_t k = 0; k < t; ++k) solved[k] = mulm(solved[k], invm(images[k]));
      coeff_values.push_back(std::move(solved));
    }
    std::vector<Entry> next;
    for (std::size_t k = 0; k < t; ++k) {
      std::vector<u64> vals;
      for (const auto& cv : coeff_values) vals.push_back(cv[k]);
      auto coeffs = interpolate(nodes, vals);
      for (unsigned e = 0; e < coeffs.size(); ++e) {
        if (!coeffs[e]) continue;
        auto exps = skeleton[k].exps;
        exps.push_back(e);
        next.push_back({std::move(exps), coeffs[e]});
      }
    }
    skeleton = std::move(next);
  }

  // Back to Q: scale so that the grevlex-leading term has coefficient 1.
  std::vector<std::pair<Monomial, u64>> terms;
  for (const auto& e : skeleton) {
    Monomial m;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (e.exps[i]) m.push_back_unchecked({static_cast<std::uint16_t>(vars[i]), static_cast<std::uint16_t>(e.exps[i])});
    terms.emplace_back(std::move(m), e.coeff);
  }
  if (terms.empty()) return std::nullopt;
  auto lead = std::max_element(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    return grevlex_compare(x.first, y.first) < 0;
  });
  const u64 scale = invm(lead->second);
  std::vector<Term> qterms;
  for (auto& [m, c] : terms) {
    auto r = reconstruct(mulm(c, scale));
    if (!r) return std::nullopt;
    qterms.push_back({std::move(m), *r});
  }
  Poly g = normalize(Poly::from_terms(ctx, std::move(qterms)));
  if (g.total_degree() != degree) return std::nullopt;
  if (!divide_exact(a, g) || !divide_exact(b, g)) return std::nullopt;
  return g;
}

}  // namespace qinv
