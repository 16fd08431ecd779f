#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "qinv/classify.hpp"

using namespace qinv;

namespace {

struct GoldenRow {
  SemidirectSpec spec;
  bool polynomial;
};

std::vector<GoldenRow> load_golden() {
  std::ifstream in(std::string(QINV_GOLDEN_DIR) + "/classify_truth.tsv");
  std::vector<GoldenRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    GoldenRow r;
    std::string verdict;
    fields >> r.spec.n >> r.spec.m >> r.spec.k >> verdict;
    r.polynomial = verdict == "yes";
    rows.push_back(r);
  }
  return rows;
}

unsigned generator_degree_sum(const ClassificationReport& r) {
  unsigned s = 0;
  for (const auto& g : r.generators) s += g.bidegree.g + g.bidegree.v;
  return s;
}

}  // namespace

TEST(Classify, MatchesGoldenTruthTable) {
  const auto rows = load_golden();
  // n in 2..8, m in 1..9, k in 0..m.
  ASSERT_EQ(rows.size(), 378u);
  for (const auto& r : rows) {
    EXPECT_EQ(classify(r.spec).polynomial, r.polynomial) << r.spec.to_string();
    EXPECT_EQ(three_case_list(r.spec), r.polynomial) << r.spec.to_string();
  }
}

TEST(Classify, Examples) {
  auto a = classify({7, 3, 0});
  EXPECT_TRUE(a.polynomial);
  EXPECT_EQ(a.citation, Citation::Th0);
  EXPECT_EQ(a.semi_invariant, SemiInvariantKind::One);
  EXPECT_EQ(a.generators.size(), 3u);
  for (const auto& g : a.generators) EXPECT_EQ(g.construction, Construction::F_I);

  EXPECT_FALSE(classify({7, 5, 0}).polynomial);
  EXPECT_FALSE(classify({5, 2, 2}).polynomial);
  EXPECT_EQ(classify({5, 2, 2}).citation, Citation::MEqualsK);
  EXPECT_FALSE(classify({6, 3, 1}).polynomial);
  EXPECT_EQ(classify({6, 3, 1}).citation, Citation::NDivides);

  auto b = classify({4, 4, 1});
  EXPECT_TRUE(b.polynomial);
  EXPECT_EQ(b.citation, Citation::Ex0);
  EXPECT_EQ(b.semi_invariant_text(), "det(v)^2");
}

TEST(Classify, SemiInvariantDescriptions) {
  EXPECT_EQ(classify({2, 2, 0}).semi_invariant_text(), "det(v)^1");
  EXPECT_EQ(classify({4, 2, 0}).semi_invariant_text(), "F^1");
  EXPECT_EQ(classify({6, 3, 0}).semi_invariant_text(), "F^2");
  EXPECT_EQ(classify({5, 3, 1}).semi_invariant_text(), "bold-F^1");
  EXPECT_EQ(classify({4, 3, 2}).semi_invariant_text(), "1");
  EXPECT_EQ(classify({3, 2, 2}).semi_invariant_text(), "principal-minor sum");
  EXPECT_EQ(classify({3, 3, 3}).semi_invariant_text(), "unknown");
}

TEST(Classify, DegreeBudgetOfInventory) {
  // Σ deg of the listed generators plus deg p equals b(q) whenever both are known.
  for (int n = 2; n <= 6; ++n)
    for (int m = 1; m <= n + 1; ++m)
      for (int k = 0; k <= m; ++k) {
        const SemidirectSpec s{n, m, k};
        auto r = classify(s);
        if (!r.polynomial) continue;
        unsigned p_degree = 0;
        switch (r.semi_invariant) {
          case SemiInvariantKind::One: break;
          case SemiInvariantKind::DetPower: p_degree = r.semi_invariant_exponent * n; break;
          case SemiInvariantKind::FPower:
          case SemiInvariantKind::BoldFPower: {
            const auto& bd = r.generators.back().bidegree;
            p_degree = r.semi_invariant_exponent * (bd.g + bd.v);
            break;
          }
          case SemiInvariantKind::PrincipalMinorSum: p_degree = 2 * k; break;
          case SemiInvariantKind::Unknown: continue;
        }
        EXPECT_EQ(Rational(generator_degree_sum(r) + p_degree), b_of_q(s)) << s.to_string();
      }
}

TEST(Classify, JsonFields) {
  auto j = classify({3, 2, 1}).to_json();
  EXPECT_EQ(j["spec"], "3,2,1");
  EXPECT_EQ(j["polynomial"], true);
  EXPECT_EQ(j["citation"], "divides");
  EXPECT_EQ(j["generator_count"], 3);
  EXPECT_EQ(j["generators"][2]["construction"], "MixedGlobal");
  EXPECT_EQ(j["generators"][2]["bidegree"], nlohmann::ordered_json({1, 5}));
  EXPECT_EQ(j["semi_invariant"], "1");
  EXPECT_EQ(to_string(Citation::Ex0), "ex-0");
}

TEST(Classify, RejectsInvalidSpec) { EXPECT_THROW(classify({3, 1, 2}), Error); }
