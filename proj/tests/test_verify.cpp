#include <gtest/gtest.h>

#include <algorithm>

#include "qinv/classify.hpp"
#include "qinv/verify.hpp"

using namespace qinv;

TEST(Invariance, DetectsNonInvariant) {
  auto q = build_semidirect({2, 1, 0});
  // A single coordinate of V is moved by g.
  auto v = check_invariance(q, Poly::variable(q.context(), q.dim_g()));
  EXPECT_FALSE(v.invariant);
  EXPECT_FALSE(v.failing.empty());
  EXPECT_TRUE(check_invariance(q, Poly::constant(q.context(), 3)).invariant);
}

TEST(Invariance, PackedMatchesPoly) {
  auto q = build_semidirect({3, 2, 0});
  for (const auto& f : all_F_I(q)) {
    auto layout = *PackedPoly::Layout::for_degree(q.dim(), 4);
    Poly scaled = f.poly * Rational(rational_content(f.poly).get_den());
    auto packed = PackedPoly::from_poly(normalize(scaled), layout);
    EXPECT_TRUE(check_invariance(q, packed).invariant);
  }
  auto layout = *PackedPoly::Layout::for_degree(q.dim(), 4);
  auto bad = PackedPoly::from_poly(Poly::variable(q.context(), q.dim_g()), layout);
  EXPECT_FALSE(check_invariance(q, bad).invariant);
}

TEST(GenericPoint, StabilizerOfDefaultPoint) {
  // g_x for x = E_m + E_k: E_ij with i > k, j > m and H_i with i > m.
  auto q = build_semidirect({4, 2, 1});
  auto x = default_generic_point(q);
  auto coords = stabilizer_coordinates(q, x);
  std::vector<std::size_t> expected;
  for (int i = 2; i <= 4; ++i)
    for (int j = 3; j <= 4; ++j)
      if (i != j) expected.push_back(q.index_E(i, j));
  expected.push_back(q.index_H(3));
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(coords, expected);
  EXPECT_EQ(rank(stabilizer_matrix(q, x)), q.dim_g() - coords.size());
}

TEST(GenericPoint, VInvarianceAgreesWithDerivations) {
  auto q = build_semidirect({3, 1, 1});
  for (const auto& c : charpoly_invariants(q)) {
    auto g = check_V_invariance_generic(q, c.poly);
    EXPECT_FALSE(g.invariant) << c.label();
    EXPECT_EQ(g.annihilator_dim, g.expected_dim);
  }
  for (const auto& c : v_invariant_generators(q)) EXPECT_TRUE(check_V_invariance_generic(q, c.poly).invariant);
}

TEST(Restriction, RejectsForeignCoordinates) {
  auto q = build_semidirect({3, 2, 0});
  // x(E_12) is not a coordinate of g_x.
  EXPECT_THROW(restriction_phi_x(q, Poly::variable(q.context(), q.index_E(1, 2))), Error);
}

TEST(Jacobian, RankOfDependentSet) {
  auto c = make_context(3, 0);
  Poly x = Poly::variable(c, 0), y = Poly::variable(c, 1), z = Poly::variable(c, 2);
  EXPECT_EQ(jacobian_rank({x, y, z}), 3u);
  EXPECT_EQ(jacobian_rank({x + y, x * x + 2 * x * y + y * y, z}), 2u);
}

TEST(Certificate, FreeCasesWithTrivialSemiInvariant) {
  struct Row {
    SemidirectSpec s;
    unsigned degree_sum;
  };
  // Σ deg = b(q) for (2,1,0), (3,2,0), (3,2,1), (3,1,1).
  for (const Row& r : {Row{{2, 1, 0}, 3}, Row{{3, 2, 0}, 8}, Row{{3, 2, 1}, 10}, Row{{3, 1, 1}, 8}}) {
    auto q = build_semidirect(r.s);
    auto gens = build_generators(q, classify(r.s));
    ASSERT_TRUE(gens.has_value()) << r.s.to_string();
    auto led = polynomiality_certificate(q, *gens);
    EXPECT_EQ(led.degree_sum, r.degree_sum) << r.s.to_string();
    EXPECT_EQ(led.b_q, Rational(r.degree_sum));
    EXPECT_TRUE(led.p_is_one);
    EXPECT_EQ(led.verdict, "certified free") << r.s.to_string();
    EXPECT_EQ(led.to_json()["verdict"], "certified free");
  }
}

TEST(Certificate, SemiInvariantShiftsTheBudget) {
  auto q = build_semidirect({2, 2, 0});
  auto gens = build_generators(q, classify(q.spec()));
  ASSERT_TRUE(gens.has_value());
  auto led = polynomiality_certificate(q, *gens);
  EXPECT_EQ(led.degree_sum, 2u);
  EXPECT_EQ(led.b_q, Rational(4));
  EXPECT_EQ(led.p_degree, 2u);
  EXPECT_TRUE(led.degree_relation);
  EXPECT_EQ(led.verdict, "not certified");
}

TEST(Certificate, MissingGeneratorIsReported) {
  auto q = build_semidirect({3, 2, 0});
  auto gens = *build_generators(q, classify(q.spec()));
  gens.pop_back();
  auto led = polynomiality_certificate(q, gens, Poly::constant(q.context(), 1));
  EXPECT_EQ(led.verdict, "not certified");
  EXPECT_FALSE(led.reasons.empty());
}

TEST(Divisibility, FindsProductDivisor) {
  auto q = build_semidirect({2, 2, 1});
  auto gens = v_invariant_generators(q);
  std::vector<Poly> polys;
  for (const auto& g : gens) polys.push_back(g.poly);
  auto v = divisibility_check(polys[0] * polys[2], polys);
  EXPECT_FALSE(v.not_divisible);
  ASSERT_TRUE(v.divisor.has_value());
  auto q2 = build_semidirect({3, 2, 1});
  std::vector<Poly> pairings;
  for (const auto& g : v_invariant_generators(q2)) pairings.push_back(g.poly);
  const Poly mixed = global_mixed_F(q2, std::nullopt).poly;
  EXPECT_TRUE(divisibility_check(mixed, pairings).not_divisible);
  EXPECT_THROW(divisibility_check(mixed, pairings, 1), CapExceeded);
}

TEST(Report, SortedDeterministicJson) {
  VerificationReport r;
  r.spec = {2, 1, 0};
  r.seed = 9;
  r.checks.push_back({"index", true, false});
  r.checks.push_back({"certificate", true, false});
  r.skipped.emplace_back("semiinv", "reason");
  auto j = r.to_json();
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["checks"][0]["name"], "certificate");
  EXPECT_EQ(j["skipped"][0]["name"], "semiinv");
  EXPECT_TRUE(r.all_passed());
  r.checks.push_back({"jacobi", false, false});
  EXPECT_FALSE(r.all_passed());
  EXPECT_EQ(r.to_json().dump(), r.to_json().dump());
}
