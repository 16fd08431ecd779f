#include "qinv/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace qinv {
namespace {

std::vector<std::pair<std::size_t, Rational>> v_substitution(const LieAlgebraData& q, const std::vector<Rational>& x) {
  if (x.size() != q.dim_v()) throw Error("generic point: expected " + std::to_string(q.dim_v()) + " V-coordinates");
  std::vector<std::pair<std::size_t, Rational>> values;
  for (std::size_t s = 0; s < x.size(); ++s) values.emplace_back(q.dim_g() + s, x[s]);
  return values;
}

std::size_t expected_annihilator_dim(const LieAlgebraData& q) {
  return q.dim_g() - static_cast<std::size_t>(generic_stabilizer(q.spec()).dim_gx);
}

// Basis of the row space of m (RREF rows).
std::vector<std::vector<Rational>> row_basis(RationalMatrix m) {
  auto pivots = rref(m);
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    std::vector<Rational> row(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

InvarianceVerdict check_invariance(const LieAlgebraData& q, const Poly& f) {
  InvarianceVerdict out;
  for (std::size_t i = 0; i < q.dim(); ++i)
    if (!lie_derivative(q, i, f).is_zero()) out.failing.push_back(i);
  out.invariant = out.failing.empty();
  return out;
}

InvarianceVerdict check_invariance(const LieAlgebraData& q, const PackedPoly& f) {
  if (f.layout().num_vars != q.dim()) throw Error("check_invariance: packed layout does not match q");
  InvarianceVerdict out;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    std::vector<std::vector<std::pair<std::size_t, PackedPoly::Coeff>>> images(q.dim());
    for (std::size_t j = 0; j < q.dim(); ++j)
      for (const auto& [k, c] : q.bracket(i, j)) {
        if (c.get_den() != 1 || !c.get_num().fits_slong_p()) throw Error("check_invariance: non-integer structure constant");
        images[j].emplace_back(k, static_cast<PackedPoly::Coeff>(c.get_num().get_si()));
      }
    if (f.derivation_image_size(images) != 0) out.failing.push_back(i);
  }
  out.invariant = out.failing.empty();
  return out;
}

InvarianceVerdict check_V_derivations(const LieAlgebraData& q, const Poly& f) {
  InvarianceVerdict out;
  for (std::size_t i = q.dim_g(); i < q.dim(); ++i)
    if (!lie_derivative(q, i, f).is_zero()) out.failing.push_back(i);
  out.invariant = out.failing.empty();
  return out;
}

std::vector<Rational> default_generic_point(const LieAlgebraData& q) {
  const auto& s = q.spec();
  std::vector<Rational> x(q.dim_v());
  for (int a = 1; a <= s.m && a <= s.n; ++a) x[q.index_covector(a, a) - q.dim_g()] = 1;
  for (int b = 1; b <= s.k && b <= s.n; ++b) x[q.index_vector(b, b) - q.dim_g()] = 1;
  return x;
}

RationalMatrix stabilizer_matrix(const LieAlgebraData& q, const std::vector<Rational>& x) {
  if (x.size() != q.dim_v()) throw Error("stabilizer_matrix: expected " + std::to_string(q.dim_v()) + " V-coordinates");
  RationalMatrix m(q.dim_v(), q.dim_g());
  for (std::size_t s = 0; s < q.dim_v(); ++s)
    for (std::size_t t = 0; t < q.dim_g(); ++t)
      for (const auto& [k, c] : q.bracket(t, q.dim_g() + s)) m(s, t) += c * x[k - q.dim_g()];
  return m;
}

GenericVInvariance check_V_invariance_generic(const LieAlgebraData& q, const Poly& f,
                                              const std::optional<std::vector<Rational>>& x) {
  const auto point = x ? *x : default_generic_point(q);
  auto directions = row_basis(stabilizer_matrix(q, point));
  GenericVInvariance out;
  out.annihilator_dim = directions.size();
  out.expected_dim = expected_annihilator_dim(q);
  if (out.annihilator_dim < out.expected_dim)
    throw Error("check_V_invariance_generic: x is not generic (dim ad*(V)x = " + std::to_string(out.annihilator_dim) +
                " < " + std::to_string(out.expected_dim) + ")");
  const Poly restricted = partial_evaluate(f, v_substitution(q, point));
  // After the substitution the V-coordinates are free; the first one serves as t.
  const std::size_t t_var = q.dim_g();
  const Poly t = Poly::variable(q.context(), t_var);
  for (std::size_t d = 0; d < directions.size(); ++d) {
    std::vector<std::pair<std::size_t, Poly>> shift;
    for (std::size_t j = 0; j < q.dim_g(); ++j)
      if (directions[d][j] != 0) shift.emplace_back(j, Poly::variable(q.context(), j) + directions[d][j] * t);
    if (!(substitute(restricted, shift) == restricted)) out.failing.push_back(d);
  }
  out.invariant = out.failing.empty();
  return out;
}

std::vector<std::size_t> stabilizer_coordinates(const LieAlgebraData& q, const std::vector<Rational>& x) {
  auto basis = kernel(stabilizer_matrix(q, x));
  std::vector<std::size_t> coords;
  for (const auto& vec : basis) {
    std::optional<std::size_t> only;
    for (std::size_t j = 0; j < vec.size(); ++j) {
      if (vec[j] == 0) continue;
      if (only) throw Error("restriction_phi_x: g_x is not spanned by basis elements at this point");
      only = j;
    }
    if (only) coords.push_back(*only);
  }
  std::sort(coords.begin(), coords.end());
  return coords;
}

namespace {

Poly check_in_stabilizer(const LieAlgebraData& q, Poly restricted, const std::vector<Rational>& point) {
  auto coords = stabilizer_coordinates(q, point);
  for (std::size_t var : restricted.variables())
    if (!std::binary_search(coords.begin(), coords.end(), var))
      throw Error("restriction_phi_x: restriction depends on " + q.context()->name(var) +
                  ", which is not a coordinate of g_x");
  return restricted;
}

}  // namespace

Poly restriction_phi_x(const LieAlgebraData& q, const Poly& f, const std::optional<std::vector<Rational>>& x) {
  const auto point = x ? *x : default_generic_point(q);
  return check_in_stabilizer(q, partial_evaluate(f, v_substitution(q, point)), point);
}

Poly restriction_phi_x(const LieAlgebraData& q, const PackedPoly& f, const std::optional<std::vector<Rational>>& x) {
  const auto point = x ? *x : default_generic_point(q);
  std::vector<std::pair<std::size_t, bool>> values;
  for (std::size_t s = 0; s < point.size(); ++s) {
    if (point[s] != 0 && point[s] != 1) throw Error("restriction_phi_x: packed route needs 0/1 coordinates");
    values.emplace_back(q.dim_g() + s, point[s] == 1);
  }
  return check_in_stabilizer(q, f.substitute_binary(values).to_poly(), point);
}

std::size_t jacobian_rank(const std::vector<Poly>& fs, std::uint64_t seed, int trials) {
  if (fs.empty()) return 0;
  const auto& ctx = fs.front().context();
  const std::size_t nv = ctx->size();
  std::vector<std::vector<Poly>> grad(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!same_context(fs[i].context(), ctx)) throw Error("jacobian_rank: context mismatch");
    for (std::size_t v = 0; v < nv; ++v) grad[i].push_back(partial_derivative(fs[i], v));
  }
  std::size_t best = 0;
  for (int t = 0; t < trials; ++t) {
    auto pt = random_point(nv, seed, static_cast<std::uint64_t>(t));
    RationalMatrix j(fs.size(), nv);
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t v = 0; v < nv; ++v)
        if (!grad[i][v].is_zero()) j(i, v) = evaluate(grad[i][v], pt);
    best = std::max(best, rank(std::move(j)));
  }
  return best;
}

nlohmann::ordered_json PolynomialityLedger::to_json() const {
  nlohmann::ordered_json j;
  j["spec"] = spec.to_string();
  j["generators"] = generators;
  j["index"] = index;
  j["all_invariant"] = all_invariant;
  j["jacobian_rank"] = jacobian_rank;
  j["degree_sum"] = degree_sum;
  j["b_q"] = to_string(b_q);
  j["p_degree"] = p_degree;
  j["degree_sum_plus_p_degree"] = degree_sum + p_degree;
  j["degree_relation"] = degree_relation;
  j["v_degree_sum"] = v_degree_sum;
  j["dim_v"] = dim_v;
  j["p_is_one"] = p_is_one;
  j["verdict"] = verdict;
  j["reasons"] = reasons;
  j["seed"] = seed;
  return j;
}

PolynomialityLedger polynomiality_certificate(const LieAlgebraData& q, const std::vector<InvariantCandidate>& fs,
                                              const std::optional<Poly>& p, std::uint64_t seed) {
  PolynomialityLedger led;
  led.spec = q.spec();
  led.seed = seed;
  led.generators = fs.size();
  led.index = index_by_rais(q.spec());
  led.b_q = b_of_q(q.spec());
  led.dim_v = q.spec().dim_v();
  led.all_invariant = true;
  std::vector<Poly> polys;
  for (const auto& c : fs) {
    polys.push_back(c.poly);
    led.degree_sum += c.poly.total_degree();
    if (c.bidegree) led.v_degree_sum += c.bidegree->v;
    else led.reasons.push_back(c.label() + " is not bihomogeneous");
    if (!check_invariance(q, c.poly).invariant) {
      led.all_invariant = false;
      led.reasons.push_back(c.label() + " is not an invariant");
    }
  }
  led.jacobian_rank = jacobian_rank(polys, seed);
  const Poly semi = p ? *p : fundamental_semi_invariant(q, seed).p;
  led.p_degree = semi.total_degree();
  led.p_is_one = semi.is_constant() && !semi.is_zero();
  led.degree_relation = Rational(led.degree_sum + led.p_degree) == led.b_q;

  if (static_cast<int>(led.generators) != led.index) led.reasons.push_back("number of generators differs from ind q");
  if (led.jacobian_rank != led.generators) led.reasons.push_back("generators are algebraically dependent");
  if (Rational(led.degree_sum) != led.b_q) led.reasons.push_back("degree sum differs from b(q)");
  if (!led.p_is_one) led.reasons.push_back("fundamental semi-invariant is not constant");
  led.verdict = led.reasons.empty() ? "certified free" : "not certified";
  return led;
}

DivisibilityVerdict divisibility_check(const Poly& f, const std::vector<Poly>& v_invariants, std::size_t product_cap) {
  DivisibilityVerdict out;
  auto fb = bidegree(f);
  const unsigned budget = fb ? fb->v : f.total_degree();
  std::vector<unsigned> degs;
  for (const auto& g : v_invariants) {
    auto b = bidegree(g);
    degs.push_back(b ? b->v : g.total_degree());
    if (g.is_constant()) throw Error("divisibility_check: constant generator");
  }
  std::vector<unsigned> exps(v_invariants.size(), 0);
  // Depth-first over exponent vectors with total V-degree <= budget.
  std::function<bool(std::size_t, unsigned, const Poly&)> walk = [&](std::size_t i, unsigned used, const Poly& prod) {
    if (i == v_invariants.size()) {
      if (prod.is_constant()) return false;
      if (++out.products_tried > product_cap) throw CapExceeded("products", product_cap, out.products_tried);
      if (divide_exact(f, prod)) {
        out.not_divisible = false;
        out.divisor = exps;
        return true;
      }
      return false;
    }
    Poly cur = prod;
    for (unsigned e = 0; used + e * degs[i] <= budget; ++e) {
      exps[i] = e;
      if (walk(i + 1, used + e * degs[i], cur)) return true;
      cur *= v_invariants[i];
    }
    exps[i] = 0;
    return false;
  };
  if (!v_invariants.empty()) walk(0, 0, Poly::constant(f.context(), 1));
  return out;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["spec"] = spec.to_string();
  j["seed"] = seed;
  j["caps"] = caps;
  auto sorted = checks;
  std::stable_sort(sorted.begin(), sorted.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : sorted) {
    nlohmann::ordered_json r;
    r["name"] = c.name;
    r["verdict"] = c.passed ? "pass" : "fail";
    r["expected_failure"] = c.expected_failure;
    r["witness"] = c.witness;
    arr.push_back(std::move(r));
  }
  j["checks"] = std::move(arr);
  auto skip = nlohmann::ordered_json::array();
  for (const auto& [name, reason] : skipped) skip.push_back({{"name", name}, {"reason", reason}});
  j["skipped"] = std::move(skip);
  j["all_passed"] = all_passed();
  return j;
}

}  // namespace qinv
