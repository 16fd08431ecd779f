#include <gtest/gtest.h>

#include "qinv/invariants.hpp"
#include "qinv/verify.hpp"

using namespace qinv;

namespace {

using Dense = std::vector<std::vector<Rational>>;

Dense to_dense(const RationalMatrix& m) {
  Dense out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

Dense multiply(const Dense& a, const Dense& b) {
  Dense out(a.size(), std::vector<Rational>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t l = 0; l < b.size(); ++l)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][l] * b[l][j];
  return out;
}

// Gaussian elimination with row swaps.
Rational dense_det(Dense a) {
  const std::size_t n = a.size();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return d;
}

// Oracle for F_I at a numeric point: det(v | Av | ... | A^{q-1} v | A^q v_I).
Rational F_I_at(const LieAlgebraData& q, const std::vector<int>& subset, const std::vector<Rational>& pt) {
  const auto& s = q.spec();
  auto [quot, rem] = quotient_remainder(s.n, s.m);
  (void)rem;
  Dense a = to_dense(g_matrix(q).evaluate(pt)), block = to_dense(covector_matrix(q).evaluate(pt));
  Dense cols;
  for (int e = 0; e < quot; ++e) {
    for (int c = 0; c < s.m; ++c) {
      std::vector<Rational> col(s.n);
      for (int r = 0; r < s.n; ++r) col[r] = block[r][c];
      cols.push_back(col);
    }
    block = multiply(a, block);
  }
  for (int c : subset) {
    std::vector<Rational> col(s.n);
    for (int r = 0; r < s.n; ++r) col[r] = block[r][c - 1];
    cols.push_back(col);
  }
  Dense m(s.n, std::vector<Rational>(s.n));
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) m[i][j] = cols[j][i];
  return dense_det(m);
}

unsigned binomial(unsigned n, unsigned k) {
  unsigned r = 1;
  for (unsigned i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

TEST(VInvariants, CountsAndInvariance) {
  struct Row {
    SemidirectSpec s;
    std::size_t count;
  };
  // C(m, n) minors of v, C(k, n) minors of w when k >= n, m k pairings.
  for (const Row& r : {Row{{2, 2, 0}, 1}, Row{{2, 2, 1}, 3}, Row{{2, 3, 0}, 3}, Row{{2, 2, 2}, 6},
                       Row{{3, 3, 1}, 4}, Row{{3, 1, 1}, 1}}) {
    auto q = build_semidirect(r.s);
    auto gens = v_invariant_generators(q);
    EXPECT_EQ(gens.size(), r.count) << r.s.to_string();
    for (const auto& g : gens) {
      EXPECT_TRUE(check_invariance(q, g.poly).invariant) << r.s.to_string() << " " << g.label();
      EXPECT_EQ(g.bidegree, bidegree(g.poly));
    }
  }
  auto gens = v_invariant_generators(build_semidirect({2, 2, 2}));
  EXPECT_EQ(gens[0].label(), "Pairing{w1,v1}");
  EXPECT_EQ(gens.back().label(), "DeltaI_w{1,2}");
}

TEST(FI, CountsAndBidegrees) {
  struct Row {
    SemidirectSpec s;
    std::size_t count;
    Bidegree bd;
  };
  // n = q m + r: C(m, r) polynomials of bidegree (m q (q - 1) / 2 + q r, n).
  for (const Row& r : {Row{{2, 1, 0}, 1, {1, 2}}, Row{{3, 2, 0}, 2, {1, 3}}, Row{{3, 1, 0}, 1, {3, 3}},
                       Row{{4, 3, 0}, 3, {1, 4}}, Row{{4, 2, 0}, 1, {2, 4}}, Row{{5, 2, 0}, 2, {4, 5}}}) {
    auto q = build_semidirect(r.s);
    auto fs = all_F_I(q);
    ASSERT_EQ(fs.size(), r.count) << r.s.to_string();
    for (const auto& f : fs) {
      EXPECT_EQ(bidegree(f.poly), r.bd) << r.s.to_string();
      EXPECT_EQ(f.bidegree, r.bd);
    }
  }
  EXPECT_EQ(all_F_I(build_semidirect({3, 2, 0}))[1].label(), "F_I{2}");
}

TEST(FI, MatchesNumericDeterminant) {
  for (const SemidirectSpec& s : {SemidirectSpec{3, 2, 0}, SemidirectSpec{4, 3, 0}, SemidirectSpec{4, 2, 0}}) {
    auto q = build_semidirect(s);
    for (const auto& f : all_F_I(q))
      for (std::uint64_t t = 0; t < 3; ++t) {
        auto pt = random_point(q.dim(), 3, t, 9);
        // F_I is the determinant up to the normalization scalar.
        Rational num = F_I_at(q, f.subset, pt), val = evaluate(f.poly, pt);
        auto pt2 = random_point(q.dim(), 4, t, 9);
        EXPECT_EQ(num * evaluate(f.poly, pt2), val * F_I_at(q, f.subset, pt2)) << s.to_string();
      }
  }
}

TEST(FI, InvariantAndRestrictsToReducedDeterminant) {
  for (int n = 2; n <= 4; ++n)
    for (int m = 1; m < n; ++m) {
      auto q = build_semidirect({n, m, 0});
      for (const auto& f : all_F_I(q)) {
        EXPECT_TRUE(check_invariance(q, f.poly).invariant) << n << "," << m << " " << f.label();
        EXPECT_EQ(restriction_phi_x(q, f.poly), restricted_F_I(q, f.subset)) << n << "," << m << " " << f.label();
      }
    }
}

TEST(FI, PackedRouteScalesByPowerOfN) {
  auto q = build_semidirect({4, 1, 0});
  auto f = build_F_I(q, {1});
  auto packed = build_F_I_packed(q, {1});
  const auto bd = bidegree(f.poly);
  ASSERT_TRUE(bd.has_value());
  Rational scale = 1;
  for (unsigned i = 0; i < bd->g; ++i) scale *= 4;
  EXPECT_EQ(packed.to_poly(), scale * f.poly);
  EXPECT_EQ(restriction_phi_x(q, packed), scale * restricted_F_I(q, {1}));
  EXPECT_TRUE(check_invariance(q, packed).invariant);
}

TEST(FI, ExpansionCap) {
  auto q = build_semidirect({4, 1, 0});
  EXPECT_THROW(build_F_I(q, {1}, 10), CapExceeded);
}

TEST(CharPoly, NewtonMatchesPrincipalMinors) {
  auto q = build_semidirect({3, 1, 1});
  auto c = q.context();
  PolyMatrix y(c, 3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) y(i, j) = Poly::variable(c, 3 * i + j) + Poly::variable(c, 10);
  auto coeffs = charpoly_coefficients(y);
  ASSERT_EQ(coeffs.size(), 4u);
  for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(coeffs[i], principal_minor_sum(y, i)) << i;
  EXPECT_EQ(coeffs[3], det(y));
}

TEST(CharPoly, SLInvariantButNotVInvariant) {
  auto q = build_semidirect({3, 1, 1});
  auto cs = charpoly_invariants(q);
  ASSERT_EQ(cs.size(), 2u);
  for (const auto& c : cs) {
    EXPECT_FALSE(c.expected_invariant);
    EXPECT_FALSE(check_V_derivations(q, c.poly).invariant) << c.label();
    auto all = check_invariance(q, c.poly);
    for (std::size_t i : all.failing) EXPECT_GE(i, q.dim_g()) << c.label();
  }
}

TEST(Mixed, GlobalInvariantForThreeTwoOne) {
  auto q = build_semidirect({3, 2, 1});
  MixedGlobalInfo info;
  auto f = global_mixed_F(q, std::nullopt, kDefaultTensorCap, &info);
  EXPECT_EQ(info.solution_dim, 1u);
  EXPECT_EQ(f.poly.total_degree(), 6u);
  EXPECT_EQ(bidegree(f.poly), (Bidegree{1, 5}));
  EXPECT_TRUE(f.expected_invariant);
  EXPECT_TRUE(check_invariance(q, f.poly).invariant);
  Poly phi = restriction_phi_x(q, f.poly);
  Poly ref = mixed_restricted_F(q, std::nullopt);
  ASSERT_FALSE(ref.is_zero());
  auto ratio = divide_exact(phi, ref);
  ASSERT_TRUE(ratio.has_value());
  EXPECT_TRUE(ratio->is_constant());
}

TEST(Mixed, SubsetsWhenRemainderIsSmall) {
  // (4,3,1): n - k = 3 = 1 * 2 + 1, so one candidate per 2-subset of {1,2,3};
  // only subsets containing 1 restrict to a nonzero determinant.
  auto q = build_semidirect({4, 3, 1});
  EXPECT_EQ(mixed_d_r(q.spec()), (std::pair<int, int>{1, 1}));
  EXPECT_TRUE(mixed_restricted_F(q, std::vector<int>{2, 3}).is_zero());
  for (const auto& sub : subsets(3, 2)) {
    auto f = global_mixed_F(q, sub);
    EXPECT_TRUE(check_invariance(q, f.poly).invariant) << f.label();
    Poly phi = restriction_phi_x(q, f.poly);
    Poly ref = mixed_restricted_F(q, sub);
    if (ref.is_zero()) {
      EXPECT_TRUE(phi.is_zero()) << f.label();
    } else {
      auto ratio = divide_exact(phi, ref);
      ASSERT_TRUE(ratio.has_value()) << f.label();
      EXPECT_TRUE(ratio->is_constant());
    }
  }
}

TEST(Mixed, DepthTwoCandidateIsFlagged) {
  auto q = build_semidirect({4, 2, 1});
  auto f = global_mixed_F(q, std::nullopt);
  EXPECT_FALSE(f.expected_invariant);
  EXPECT_FALSE(check_invariance(q, f.poly).invariant);
  EXPECT_TRUE(check_invariance(q, f.poly).failing.front() >= q.dim_g());
}

TEST(Finder, RecoversFIForTwoOneZero) {
  auto q = build_semidirect({2, 1, 0});
  auto basis = invariant_finder(q, {1, 2});
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_TRUE(in_span(build_F_I(q, {1}).poly, basis));
  EXPECT_EQ(to_string(invariant_finder(q, {1, 2})[0].poly), to_string(basis[0].poly));
  EXPECT_TRUE(invariant_finder(q, {1, 1}).empty());
}

TEST(Finder, MixedGeneratorForThreeOneOne) {
  auto q = build_semidirect({3, 1, 1});
  // m = k = n - 2: the mixed generator sits in bidegree (2, b(q) - 2 k^2 - 2).
  EXPECT_EQ(b_of_q(q.spec()), Rational(8));
  auto basis = invariant_finder(q, {2, 4});
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_TRUE(check_invariance(q, basis[0].poly).invariant);
  EXPECT_EQ(basis[0].poly.size(), 80u);
  auto again = invariant_finder(q, {2, 4});
  EXPECT_EQ(to_string(again[0].poly), to_string(basis[0].poly));
  EXPECT_THROW(invariant_finder(q, {2, 4}, 10), CapExceeded);
}

TEST(Subsets, Lexicographic) {
  auto s = subsets(4, 2);
  ASSERT_EQ(s.size(), binomial(4, 2));
  EXPECT_EQ(s.front(), (std::vector<int>{1, 2}));
  EXPECT_EQ(s.back(), (std::vector<int>{3, 4}));
  EXPECT_EQ(quotient_remainder(6, 3), (std::pair<int, int>{1, 3}));
  EXPECT_EQ(quotient_remainder(7, 3), (std::pair<int, int>{2, 1}));
}
