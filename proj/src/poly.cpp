#include "qinv/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <queue>
#include <unordered_map>

namespace qinv {

CapExceeded::CapExceeded(std::string cap, std::size_t limit, std::size_t requested)
    : Error("resource cap '" + cap + "' exceeded: limit " + std::to_string(limit) + ", requested " +
            std::to_string(requested)),
      cap_(std::move(cap)),
      limit_(limit),
      requested_(requested) {}

std::string Context::name(std::size_t var) const {
  if (var < num_g_) return "g" + std::to_string(var + 1);
  return "v" + std::to_string(var - num_g_ + 1);
}

std::optional<std::size_t> Context::find(std::string_view name) const {
  if (name.size() < 2 || (name[0] != 'g' && name[0] != 'v')) return std::nullopt;
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
  if (ec != std::errc() || ptr != name.data() + name.size() || idx == 0) return std::nullopt;
  if (name[0] == 'g') {
    if (idx > num_g_) return std::nullopt;
    return idx - 1;
  }
  if (idx > num_v_) return std::nullopt;
  return num_g_ + idx - 1;
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
  return a == b || (a && b && *a == *b);
}

namespace {

void require_same(const Poly& a, const Poly& b) {
  if (!same_context(a.context(), b.context())) throw Error("polynomial context mismatch");
}

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(std::size_t var, unsigned exp) {
  Monomial m;
  if (exp > 0) m.push_back_unchecked({static_cast<std::uint16_t>(var), static_cast<std::uint16_t>(exp)});
  return m;
}

Monomial Monomial::from_exponents(std::span<const unsigned> exps) {
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] > 0) m.push_back_unchecked({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(exps[i])});
  return m;
}

unsigned Monomial::exponent(std::size_t var) const {
  for (const auto& f : factors_) {
    if (f.var == var) return f.exp;
    if (f.var > var) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + other.factors_.size());
  auto i = factors_.begin(), ie = factors_.end();
  auto j = other.factors_.begin(), je = other.factors_.end();
  while (i != ie && j != je) {
    if (i->var < j->var) {
      r.factors_.push_back(*i++);
    } else if (j->var < i->var) {
      r.factors_.push_back(*j++);
    } else {
      r.factors_.push_back({i->var, static_cast<std::uint16_t>(i->exp + j->exp)});
      ++i;
      ++j;
    }
  }
  r.factors_.insert(r.factors_.end(), i, ie);
  r.factors_.insert(r.factors_.end(), j, je);
  r.degree_ = degree_ + other.degree_;
  return r;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  auto j = other.factors_.begin(), je = other.factors_.end();
  for (const auto& f : factors_) {
    while (j != je && j->var < f.var) ++j;
    if (j == je || j->var != f.var || j->exp < f.exp) return false;
  }
  return true;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  if (other.degree_ > degree_) return std::nullopt;
  Monomial r;
  auto j = other.factors_.begin(), je = other.factors_.end();
  for (const auto& f : factors_) {
    if (j != je && j->var < f.var) return std::nullopt;
    if (j != je && j->var == f.var) {
      if (j->exp > f.exp) return std::nullopt;
      if (j->exp < f.exp) r.push_back_unchecked({f.var, static_cast<std::uint16_t>(f.exp - j->exp)});
      ++j;
    } else {
      r.push_back_unchecked(f);
    }
  }
  if (j != je) return std::nullopt;
  return r;
}

Monomial Monomial::gcd(const Monomial& other) const {
  Monomial r;
  auto j = other.factors_.begin(), je = other.factors_.end();
  for (const auto& f : factors_) {
    while (j != je && j->var < f.var) ++j;
    if (j == je) break;
    if (j->var == f.var) r.push_back_unchecked({f.var, std::min(f.exp, j->exp)});
  }
  return r;
}

Monomial Monomial::lowered(std::size_t var) const {
  Monomial r;
  for (const auto& f : factors_) {
    if (f.var == var) {
      if (f.exp > 1) r.push_back_unchecked({f.var, static_cast<std::uint16_t>(f.exp - 1)});
    } else {
      r.push_back_unchecked(f);
    }
  }
  return r;
}

Monomial Monomial::without(std::size_t var) const {
  Monomial r;
  for (const auto& f : factors_)
    if (f.var != var) r.push_back_unchecked(f);
  return r;
}

std::size_t Monomial::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& f : factors_) {
    h ^= (static_cast<std::uint64_t>(f.var) << 16) | f.exp;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  auto i = static_cast<std::ptrdiff_t>(fa.size()) - 1;
  auto j = static_cast<std::ptrdiff_t>(fb.size()) - 1;
  while (i >= 0 && j >= 0) {
    const auto& x = fa[i];
    const auto& y = fb[j];
    if (x.var == y.var) {
      if (x.exp != y.exp) return x.exp < y.exp ? 1 : -1;
      --i;
      --j;
    } else {
      // The larger variable is present in only one monomial.
      return x.var > y.var ? -1 : 1;
    }
  }
  if (i >= 0) return -1;
  if (j >= 0) return 1;
  return 0;
}

// ---------------------------------------------------------------- Poly

Poly Poly::constant(ContextPtr ctx, const Rational& c) {
  Poly p(std::move(ctx));
  if (c != 0) {
    p.terms_.push_back({Monomial{}, c});
    p.terms_.back().coeff.canonicalize();
  }
  return p;
}

Poly Poly::variable(ContextPtr ctx, std::size_t var) {
  if (var >= ctx->size()) throw Error("variable index out of range");
  Poly p(std::move(ctx));
  p.terms_.push_back({Monomial::variable(var), Rational(1)});
  return p;
}

Poly Poly::monomial(ContextPtr ctx, Monomial m, const Rational& c) {
  Poly p(std::move(ctx));
  if (c != 0) {
    p.terms_.push_back({std::move(m), c});
    p.terms_.back().coeff.canonicalize();
  }
  return p;
}

Poly Poly::from_terms(ContextPtr ctx, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return grevlex_compare(a.mono, b.mono) > 0; });
  Poly p(std::move(ctx));
  for (auto& t : terms) {
    t.coeff.canonicalize();
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
      if (p.terms_.back().coeff == 0) p.terms_.pop_back();
    } else if (t.coeff != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  // Cancelled runs may leave a coefficient that was re-added after popping.
  std::erase_if(p.terms_, [](const Term& t) { return t.coeff == 0; });
  return p;
}

Poly Poly::from_sorted_terms(ContextPtr ctx, std::vector<Term> terms) {
  Poly p(std::move(ctx));
  p.terms_ = std::move(terms);
  return p;
}

Rational Poly::constant_value() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
  return 0;
}

unsigned Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

unsigned Poly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
  return d;
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  return terms_.front().mono.degree() == terms_.back().mono.degree();
}

std::vector<std::size_t> Poly::variables() const {
  std::vector<char> seen(ctx_->size(), 0);
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) seen[f.var] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = grevlex_compare(a[i].mono, b[j].mono);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
      if (subtract) out.back().coeff = -out.back().coeff;
    } else {
      Rational s = subtract ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
      if (s != 0) out.push_back({a[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) {
    out.push_back(b[j]);
    if (subtract) out.back().coeff = -out.back().coeff;
  }
  return out;
}

struct HeapEntry {
  Monomial mono;
  std::uint32_t i;
  std::uint32_t j;
};

struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const { return grevlex_compare(a.mono, b.mono) < 0; }
};

// Johnson's heap multiplication; output is produced in descending order.
std::vector<Term> heap_multiply(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;
  // Stream i walks b; stream i+1 is only started once stream i has emitted
  // its first product, which keeps the heap small.
  heap.push({a[0].mono * b[0].mono, 0, 0});
  Rational acc, prod;
  Monomial current;
  bool have = false;
  while (!heap.empty()) {
    HeapEntry e = heap.top();
    heap.pop();
    mpq_mul(prod.get_mpq_t(), a[e.i].coeff.get_mpq_t(), b[e.j].coeff.get_mpq_t());
    if (have && e.mono == current) {
      acc += prod;
    } else {
      if (have && acc != 0) out.push_back({std::move(current), acc});
      current = e.mono;
      acc = prod;
      have = true;
    }
    if (e.j == 0 && e.i + 1 < a.size()) heap.push({a[e.i + 1].mono * b[0].mono, e.i + 1, 0});
    if (e.j + 1 < b.size()) heap.push({a[e.i].mono * b[e.j + 1].mono, e.i, e.j + 1});
  }
  if (have && acc != 0) out.push_back({std::move(current), acc});
  return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& other) {
  require_same(*this, other);
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = other.terms_;
    return *this;
  }
  terms_ = merge_terms(terms_, other.terms_, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  require_same(*this, other);
  if (other.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, other.terms_, true);
  return *this;
}

Poly& Poly::operator*=(const Poly& other) {
  *this = *this * other;
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r(a);
  r += b;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r(a);
  r -= b;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same(a, b);
  Poly r(a.context());
  if (a.is_zero() || b.is_zero()) return r;
  if (a.size() == 1) return mul_monomial(b, a.terms_[0].mono, a.terms_[0].coeff);
  if (b.size() == 1) return mul_monomial(a, b.terms_[0].mono, b.terms_[0].coeff);
  // Keep the heap over the shorter operand.
  r.terms_ = a.size() <= b.size() ? heap_multiply(a.terms_, b.terms_) : heap_multiply(b.terms_, a.terms_);
  return r;
}

Poly operator*(const Rational& c, const Poly& p) {
  Poly r(p);
  r *= c;
  return r;
}

bool Poly::operator==(const Poly& other) const {
  if (!same_context(ctx_, other.ctx_) || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].mono == other.terms_[i].mono) || terms_[i].coeff != other.terms_[i].coeff) return false;
  return true;
}

Poly mul_monomial(const Poly& p, const Monomial& m, const Rational& c) {
  std::vector<Term> out;
  if (c == 0) return Poly(p.context());
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back({t.mono * m, t.coeff * c});
  return Poly::from_sorted_terms(p.context(), std::move(out));
}

Poly pow(const Poly& p, unsigned exponent) {
  Poly result = Poly::constant(p.context(), 1);
  Poly base = p;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Poly arith(const Poly& a, const Poly& b, ArithOp op, unsigned exponent) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
    case ArithOp::pow:
      return pow(a, exponent);
  }
  throw Error("unknown arithmetic operation");
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  require_same(a, b);
  if (b.is_zero()) throw Error("division by the zero polynomial");
  Poly zero(a.context());
  if (a.is_zero()) return zero;
  const auto& d = b.terms();
  const auto& p = a.terms();
  const Term& lt = d.front();
  if (!lt.mono.divides(p.front().mono)) return std::nullopt;
  if (a.total_degree() < b.total_degree()) return std::nullopt;
  if (d.size() == 1) {
    std::vector<Term> out;
    out.reserve(p.size());
    for (const auto& t : p) {
      auto q = t.mono.divide(lt.mono);
      if (!q) return std::nullopt;
      out.push_back({std::move(*q), t.coeff / lt.coeff});
    }
    return Poly::from_sorted_terms(a.context(), std::move(out));
  }
  // The trailing monomials must match up as well.
  if (!d.back().mono.divides(p.back().mono)) return std::nullopt;

  std::vector<Term> quotient;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;
  std::size_t ip = 0;
  Rational acc, prod;
  const Rational inv_lc = 1 / lt.coeff;
  while (ip < p.size() || !heap.empty()) {
    Monomial mono;
    if (heap.empty()) {
      mono = p[ip].mono;
    } else if (ip >= p.size()) {
      mono = heap.top().mono;
    } else {
      mono = grevlex_compare(p[ip].mono, heap.top().mono) >= 0 ? p[ip].mono : heap.top().mono;
    }
    acc = 0;
    if (ip < p.size() && p[ip].mono == mono) acc = p[ip++].coeff;
    while (!heap.empty() && heap.top().mono == mono) {
      HeapEntry e = heap.top();
      heap.pop();
      mpq_mul(prod.get_mpq_t(), quotient[e.i].coeff.get_mpq_t(), d[e.j].coeff.get_mpq_t());
      acc -= prod;
      if (e.j + 1 < d.size()) heap.push({quotient[e.i].mono * d[e.j + 1].mono, e.i, e.j + 1});
    }
    if (acc == 0) continue;
    auto qm = mono.divide(lt.mono);
    if (!qm) return std::nullopt;
    quotient.push_back({std::move(*qm), acc * inv_lc});
    auto k = static_cast<std::uint32_t>(quotient.size() - 1);
    heap.push({quotient[k].mono * d[1].mono, k, 1});
  }
  return Poly::from_sorted_terms(a.context(), std::move(quotient));
}

Poly divide_or_throw(const Poly& a, const Poly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw Error("polynomial division is not exact");
  return std::move(*q);
}

Poly partial_derivative(const Poly& p, std::size_t var) {
  if (var >= p.context()->size()) throw Error("variable index out of range");
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    unsigned e = t.mono.exponent(var);
    if (e == 0) continue;
    out.push_back({t.mono.lowered(var), t.coeff * e});
  }
  // Dividing by the same variable preserves the term order.
  return Poly::from_sorted_terms(p.context(), std::move(out));
}

Rational evaluate(const Poly& p, std::span<const Rational> point) {
  if (point.size() != p.context()->size()) throw Error("evaluation point has wrong length");
  Rational sum = 0, term;
  for (const auto& t : p.terms()) {
    term = t.coeff;
    for (const auto& f : t.mono.factors()) {
      Rational pw;
      mpz_pow_ui(mpq_numref(pw.get_mpq_t()), mpq_numref(point[f.var].get_mpq_t()), f.exp);
      mpz_pow_ui(mpq_denref(pw.get_mpq_t()), mpq_denref(point[f.var].get_mpq_t()), f.exp);
      term *= pw;
    }
    sum += term;
  }
  return sum;
}

Poly partial_evaluate(const Poly& p, std::span<const std::pair<std::size_t, Rational>> values) {
  std::vector<const Rational*> lookup(p.context()->size(), nullptr);
  for (const auto& [var, val] : values) lookup.at(var) = &val;
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  for (const auto& t : p.terms()) {
    Monomial rest;
    Rational c = t.coeff;
    for (const auto& f : t.mono.factors()) {
      if (lookup[f.var]) {
        Rational pw;
        mpz_pow_ui(mpq_numref(pw.get_mpq_t()), mpq_numref(lookup[f.var]->get_mpq_t()), f.exp);
        mpz_pow_ui(mpq_denref(pw.get_mpq_t()), mpq_denref(lookup[f.var]->get_mpq_t()), f.exp);
        c *= pw;
      } else {
        rest.push_back_unchecked(f);
      }
    }
    if (c == 0) continue;
    acc[std::move(rest)] += c;
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, c});
  return Poly::from_terms(p.context(), std::move(out));
}

Poly substitute(const Poly& p, std::span<const std::pair<std::size_t, Poly>> values) {
  std::vector<const Poly*> lookup(p.context()->size(), nullptr);
  for (const auto& [var, val] : values) {
    if (!same_context(val.context(), p.context())) throw Error("polynomial context mismatch");
    lookup.at(var) = &val;
  }
  // Cache powers of the substituted polynomials.
  std::vector<std::vector<Poly>> powers(p.context()->size());
  auto power = [&](std::size_t var, unsigned e) -> const Poly& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(Poly::constant(p.context(), 1));
    while (cache.size() <= e) cache.push_back(cache.back() * *lookup[var]);
    return cache[e];
  };
  Poly sum(p.context());
  std::vector<Term> plain;
  for (const auto& t : p.terms()) {
    Monomial rest;
    std::vector<std::pair<std::size_t, unsigned>> subs;
    for (const auto& f : t.mono.factors()) {
      if (lookup[f.var])
        subs.emplace_back(f.var, f.exp);
      else
        rest.push_back_unchecked(f);
    }
    if (subs.empty()) {
      plain.push_back(t);
      continue;
    }
    Poly term = Poly::monomial(p.context(), rest, t.coeff);
    for (const auto& [var, e] : subs) term *= power(var, e);
    sum += term;
  }
  sum += Poly::from_terms(p.context(), std::move(plain));
  return sum;
}

std::optional<Bidegree> bidegree(const Poly& p) {
  if (p.is_zero()) return Bidegree{};
  std::optional<Bidegree> result;
  const auto& ctx = *p.context();
  for (const auto& t : p.terms()) {
    Bidegree b;
    for (const auto& f : t.mono.factors()) (ctx.is_g(f.var) ? b.g : b.v) += f.exp;
    if (!result)
      result = b;
    else if (!(*result == b))
      return std::nullopt;
  }
  return result;
}

Rational rational_content(const Poly& p) {
  if (p.is_zero()) return 0;
  Integer num_gcd = 0, den_lcm = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(num_gcd, den_lcm);
  c.canonicalize();
  if (p.leading().coeff < 0) c = -c;
  return c;
}

Poly normalize(const Poly& p) {
  if (p.is_zero()) return p;
  Rational c = rational_content(p);
  Poly r(p);
  r *= Rational(1 / c);
  return r;
}

// ---------------------------------------------------------------- text

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& ctx = *p.context();
  bool first = true;
  for (const auto& t : p.terms()) {
    bool negative = t.coeff < 0;
    Rational mag = abs(t.coeff);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    bool wrote = false;
    if (mag != 1 || t.mono.is_one()) {
      out += mag.get_str();
      wrote = true;
    }
    for (const auto& f : t.mono.factors()) {
      if (wrote) out += "*";
      out += ctx.name(f.var);
      if (f.exp > 1) out += "^" + std::to_string(f.exp);
      wrote = true;
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(const ContextPtr& ctx, std::string_view s) : ctx_(ctx), s_(s) {}

  Poly parse() {
    std::vector<Term> terms;
    skip_ws();
    if (pos_ == s_.size()) throw Error("empty polynomial text");
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    while (true) {
      skip_ws();
      terms.push_back(parse_term(negative));
      skip_ws();
      if (pos_ == s_.size()) break;
      char c = s_[pos_++];
      if (c == '+')
        negative = false;
      else if (c == '-')
        negative = true;
      else
        fail("expected '+' or '-'");
    }
    return Poly::from_terms(ctx_, std::move(terms));
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  Term parse_term(bool negative) {
    Rational coeff = 1;
    std::vector<unsigned> exps(ctx_->size(), 0);
    bool any = false;
    while (true) {
      skip_ws();
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
        Rational r(std::string(s_.substr(start, pos_ - start)));
        r.canonicalize();
        coeff *= r;
      } else if (c == 'g' || c == 'v') {
        std::size_t start = pos_++;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        auto var = ctx_->find(s_.substr(start, pos_ - start));
        if (!var) fail("unknown variable '" + std::string(s_.substr(start, pos_ - start)) + "'");
        unsigned e = 1;
        skip_ws();
        if (peek() == '^') {
          ++pos_;
          skip_ws();
          std::size_t es = pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (es == pos_) fail("missing exponent");
          e = static_cast<unsigned>(std::stoul(std::string(s_.substr(es, pos_ - es))));
        }
        exps[*var] += e;
      } else {
        fail("expected coefficient or variable");
      }
      any = true;
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
    }
    if (!any) fail("empty term");
    if (negative) coeff = -coeff;
    return {Monomial::from_exponents(exps), coeff};
  }

  const ContextPtr& ctx_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const ContextPtr& ctx, std::string_view text) { return PolyParser(ctx, text).parse(); }

}  // namespace qinv
