#include "qinv/pipeline.hpp"

#include <algorithm>

namespace qinv {

nlohmann::ordered_json Caps::to_json() const {
  return {{"dim", dim},       {"pfaffian_dim", pfaffian_dim}, {"minors", minors},    {"finder_slice", finder_slice},
          {"tensor", tensor}, {"expansion", expansion},       {"products", products}};
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"jacobi",       "index",       "invariance",  "v-generic",
                                                 "restriction",  "independence", "certificate", "semiinv",
                                                 "divisibility"};
  return names;
}

nlohmann::ordered_json json_envelope(const std::string& command, const std::optional<SemidirectSpec>& spec,
                                     std::uint64_t seed, const Caps& caps) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  j["spec"] = spec ? nlohmann::ordered_json(spec->to_string()) : nlohmann::ordered_json(nullptr);
  j["seed"] = seed;
  j["caps"] = caps.to_json();
  return j;
}

namespace {

bool mixed_case(const SemidirectSpec& s) { return 0 < s.k && s.k < s.m && s.m < s.n; }

std::vector<InvariantCandidate> mixed_globals(const LieAlgebraData& q, const Caps& caps) {
  const auto& s = q.spec();
  auto [d, r] = mixed_d_r(s);
  (void)d;
  std::vector<InvariantCandidate> out;
  if (r == s.m - s.k) {
    out.push_back(global_mixed_F(q, std::nullopt, caps.tensor));
  } else {
    for (const auto& sub : subsets(s.m, s.k + r)) out.push_back(global_mixed_F(q, sub, caps.tensor));
  }
  return out;
}

std::optional<std::vector<int>> subset_or_none(const LieAlgebraData& q, const InvariantCandidate& c) {
  auto [d, r] = mixed_d_r(q.spec());
  (void)d;
  if (r == q.spec().m - q.spec().k) return std::nullopt;
  return c.subset;
}

}  // namespace

std::vector<InvariantCandidate> all_candidates(const LieAlgebraData& q, const Caps& caps) {
  const auto& s = q.spec();
  auto out = v_invariant_generators(q);
  if (s.k == 0 && s.m < s.n) {
    auto r = quotient_remainder(s.n, s.m).second;
    for (const auto& sub : subsets(s.m, r)) out.push_back(build_F_I(q, sub, caps.expansion));
  }
  if (mixed_case(s))
    for (auto& c : mixed_globals(q, caps)) out.push_back(std::move(c));
  if (s.m == s.k && s.k <= s.n - 1)
    for (auto& c : charpoly_invariants(q)) out.push_back(std::move(c));
  if (s.m == s.k && s.k == s.n - 2) {
    auto report = classify(s);
    auto slice = invariant_finder(q, report.generators.back().bidegree, caps.finder_slice);
    for (auto& c : slice) out.push_back(std::move(c));
  }
  return out;
}

std::vector<InvariantCandidate> emit_construction(const LieAlgebraData& q, const std::string& construction,
                                                  const Caps& caps, std::optional<Bidegree> slice) {
  const auto& s = q.spec();
  auto unavailable = [&]() { return Error("construction " + construction + " is not available for " + s.to_string()); };
  if (construction == "DeltaI" || construction == "Pairing") {
    std::vector<InvariantCandidate> out;
    const auto want = construction == "DeltaI" ? Construction::DeltaI : Construction::Pairing;
    for (auto& c : v_invariant_generators(q))
      if (c.construction == want) out.push_back(std::move(c));
    if (out.empty()) throw unavailable();
    return out;
  }
  if (construction == "F_I") {
    if (s.k != 0 || s.m >= s.n) throw unavailable();
    std::vector<InvariantCandidate> out;
    auto r = quotient_remainder(s.n, s.m).second;
    for (const auto& sub : subsets(s.m, r)) out.push_back(build_F_I(q, sub, caps.expansion));
    return out;
  }
  if (construction == "CharPoly") {
    if (s.m != s.k || s.k == 0 || s.k > s.n - 1) throw unavailable();
    return charpoly_invariants(q);
  }
  if (construction == "MixedGlobal") {
    if (!mixed_case(s)) throw unavailable();
    return mixed_globals(q, caps);
  }
  if (construction == "MixedRestricted") {
    if (!mixed_case(s)) throw unavailable();
    auto [d, r] = mixed_d_r(s);
    (void)d;
    std::vector<InvariantCandidate> out;
    auto make = [&](const std::optional<std::vector<int>>& sub) {
      Poly p = mixed_restricted_F(q, sub);
      InvariantCandidate c{p, bidegree(p), Construction::MixedRestricted, sub ? *sub : std::vector<int>{}, true,
                           "as defined (determinant in g_x-coordinates)"};
      out.push_back(std::move(c));
    };
    if (r == s.m - s.k) make(std::nullopt);
    else
      for (const auto& sub : subsets(s.m, s.k + r)) make(sub);
    return out;
  }
  if (construction == "Finder") {
    if (!slice) throw Error("construction Finder needs a bidegree");
    return invariant_finder(q, *slice, caps.finder_slice);
  }
  throw Error("unknown construction " + construction);
}

namespace {

nlohmann::ordered_json bidegree_json(const std::optional<Bidegree>& b) {
  if (!b) return nullptr;
  return {b->g, b->v};
}

}  // namespace

std::optional<Poly> described_semi_invariant(const LieAlgebraData& q, const ClassificationReport& report,
                                             const Caps& caps) {
  const auto& s = q.spec();
  const unsigned e = static_cast<unsigned>(report.semi_invariant_exponent);
  switch (report.semi_invariant) {
    case SemiInvariantKind::One: return Poly::constant(q.context(), 1);
    case SemiInvariantKind::DetPower: {
      auto v = covector_matrix(q);
      return pow(det(v), e);
    }
    case SemiInvariantKind::FPower: return pow(build_F_I(q, subsets(s.m, s.m).front(), caps.expansion).poly, e);
    case SemiInvariantKind::BoldFPower: return pow(global_mixed_F(q, std::nullopt, caps.tensor).poly, e);
    case SemiInvariantKind::PrincipalMinorSum: {
      const std::size_t n = static_cast<std::size_t>(s.n), k = static_cast<std::size_t>(s.k);
      PolyMatrix y(q.context(), n + k, n + k);
      auto v = covector_matrix(q);
      auto w = vector_matrix(q);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) y(i, n + j) = v(i, j);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) y(n + i, j) = w(i, j);
      return principal_minor_sum(y, 2 * k);
    }
    case SemiInvariantKind::Unknown: return std::nullopt;
  }
  return std::nullopt;
}

VerificationReport run_verify(const RunConfig& config) {
  for (const auto& c : config.checks)
    if (std::find(check_names().begin(), check_names().end(), c) == check_names().end())
      throw Error("unknown check " + c);
  auto want = [&](const std::string& name) { return config.checks.empty() || config.checks.count(name) > 0; };

  VerificationReport report;
  report.spec = config.spec;
  report.seed = config.seed;
  report.caps = config.caps.to_json();
  const auto q = build_semidirect(config.spec, config.caps.dim);
  const auto& s = q.spec();
  const auto classification = classify(s);

  if (want("jacobi")) {
    const bool exhaustive = q.dim() <= kJacobiExhaustiveDim;
    CheckRecord r{"jacobi", jacobi_holds(q, exhaustive, 200, config.seed), false};
    r.witness = {{"dim", q.dim()}, {"exhaustive", exhaustive}};
    report.checks.push_back(std::move(r));
  }
  if (want("index")) {
    const int by_rank = index_by_rank(q, kDefaultTrials, config.seed);
    const int by_rais = index_by_rais(s);
    CheckRecord r{"index", by_rank == by_rais, false};
    r.witness = {{"index_by_rank", by_rank}, {"index_by_rais", by_rais}, {"b_q", to_string(b_of_q(s))}};
    report.checks.push_back(std::move(r));
  }

  const bool need_candidates = want("invariance") || want("v-generic") || want("restriction") || want("divisibility");
  std::vector<InvariantCandidate> candidates;
  if (need_candidates) candidates = all_candidates(q, config.caps);

  for (const auto& c : candidates) {
    const bool expect = c.expected_invariant;
    if (want("invariance")) {
      auto v = check_invariance(q, c.poly);
      CheckRecord r{"invariance:" + c.label(), v.invariant == expect, !expect};
      r.witness = {{"bidegree", bidegree_json(c.bidegree)},
                   {"terms", c.poly.size()},
                   {"nonzero_derivations", v.failing.size()}};
      report.checks.push_back(std::move(r));
    }
    if (want("v-generic")) {
      auto v = check_V_invariance_generic(q, c.poly);
      CheckRecord r{"v-generic:" + c.label(), v.invariant == expect, !expect};
      r.witness = {{"annihilator_dim", v.annihilator_dim}, {"failing_directions", v.failing.size()}};
      report.checks.push_back(std::move(r));
    }
    if (want("restriction") && expect &&
        (c.construction == Construction::F_I || c.construction == Construction::MixedGlobal)) {
      Poly phi = restriction_phi_x(q, c.poly);
      Poly reference = c.construction == Construction::F_I ? restricted_F_I(q, c.subset)
                                                           : mixed_restricted_F(q, subset_or_none(q, c));
      bool ok;
      std::string relation;
      if (reference.is_zero()) {
        ok = phi.is_zero();
        relation = "both zero";
      } else if (c.construction == Construction::F_I) {
        ok = phi == reference;
        relation = "equal";
      } else {
        auto quotient = divide_exact(phi, reference);
        ok = quotient && quotient->is_constant() && !quotient->is_zero();
        relation = ok ? "proportional, factor " + to_string(quotient->constant_value()) : "not proportional";
      }
      CheckRecord r{"restriction:" + c.label(), ok, false};
      r.witness = {{"relation", relation}, {"restricted_terms", phi.size()}};
      report.checks.push_back(std::move(r));
    }
    if (want("divisibility") && expect && c.construction != Construction::Pairing &&
        c.construction != Construction::DeltaI) {
      std::vector<Poly> vinv;
      for (const auto& g : v_invariant_generators(q)) vinv.push_back(g.poly);
      auto v = divisibility_check(c.poly, vinv, config.caps.products);
      CheckRecord r{"divisibility:" + c.label(), v.not_divisible, false};
      r.witness = {{"products_tried", v.products_tried}, {"v_invariants", vinv.size()}};
      report.checks.push_back(std::move(r));
    }
  }

  std::optional<std::vector<InvariantCandidate>> generators;
  if (want("independence") || want("certificate")) {
    generators = build_generators(q, classification);
    if (!generators) {
      const std::string reason = classification.polynomial ? "expected generators are not constructible here"
                                                            : "not a polynomial ring";
      if (want("independence")) report.skipped.emplace_back("independence", reason);
      if (want("certificate")) report.skipped.emplace_back("certificate", reason);
    }
  }
  if (want("independence") && generators) {
    std::vector<Poly> polys;
    for (const auto& g : *generators) polys.push_back(g.poly);
    const auto rk = jacobian_rank(polys, config.seed);
    CheckRecord r{"independence", rk == polys.size(), false};
    r.witness = {{"generators", polys.size()}, {"jacobian_rank", rk}};
    report.checks.push_back(std::move(r));
  }

  std::optional<SemiInvariantResult> semi;
  auto semi_invariant = [&]() -> const SemiInvariantResult& {
    if (!semi) semi = fundamental_semi_invariant(q, config.seed, config.caps.pfaffian_dim, config.caps.minors);
    return *semi;
  };
  if (want("certificate") && generators) {
    auto led = polynomiality_certificate(q, *generators, semi_invariant().p, config.seed);
    // With p = 1 the set must be certified; otherwise the degree relation must hold.
    const bool ok = classification.semi_invariant == SemiInvariantKind::One ? led.verdict == "certified free"
                                                                             : led.degree_relation && led.all_invariant;
    CheckRecord r{"certificate", ok, false};
    r.witness = led.to_json();
    report.checks.push_back(std::move(r));
  }
  if (want("semiinv")) {
    const auto& res = semi_invariant();
    auto reference = described_semi_invariant(q, classification, config.caps);
    bool ok = true;
    std::string relation = "no closed form";
    if (reference) {
      ok = normalize(res.p) == normalize(*reference);
      relation = ok ? "equal up to scalar" : "differs";
    }
    CheckRecord r{"semiinv", ok, false};
    r.witness = {{"expected", classification.semi_invariant_text()},
                 {"relation", relation},
                 {"degree", res.p.total_degree()},
                 {"rank", res.rank},
                 {"minors_used", res.minors_used},
                 {"minors_zero", res.minors_zero},
                 {"minors_skipped", res.minors_skipped}};
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace qinv
