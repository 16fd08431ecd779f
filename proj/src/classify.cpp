#include "qinv/classify.hpp"

namespace qinv {

std::string to_string(Citation c) {
  switch (c) {
    case Citation::Ex0: return "ex-0";
    case Citation::Th0: return "th-0";
    case Citation::MEqualsK: return "m=k";
    case Citation::Divides: return "divides";
    case Citation::NDivides: return "n-divides";
  }
  return "?";
}

std::string ClassificationReport::semi_invariant_text() const {
  const std::string e = std::to_string(semi_invariant_exponent);
  switch (semi_invariant) {
    case SemiInvariantKind::One: return "1";
    case SemiInvariantKind::DetPower: return "det(v)^" + e;
    case SemiInvariantKind::FPower: return "F^" + e;
    case SemiInvariantKind::BoldFPower: return "bold-F^" + e;
    case SemiInvariantKind::PrincipalMinorSum: return "principal-minor sum";
    case SemiInvariantKind::Unknown: return "unknown";
  }
  return "?";
}

nlohmann::ordered_json ClassificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["spec"] = spec.to_string();
  j["polynomial"] = polynomial;
  j["citation"] = to_string(citation);
  j["generator_count"] = generators.size();
  auto gens = nlohmann::ordered_json::array();
  for (const auto& g : generators) {
    InvariantCandidate tmp{Poly(make_context(0, 0)), g.bidegree, g.construction, g.subset, true, "", g.from_w};
    gens.push_back({{"construction", tmp.label()}, {"bidegree", {g.bidegree.g, g.bidegree.v}}});
  }
  j["generators"] = std::move(gens);
  j["semi_invariant"] = semi_invariant_text();
  return j;
}

bool three_case_list(const SemidirectSpec& s) {
  const int n = s.n, m = s.m, k = s.k;
  if (k == 0 && m <= n + 1) {
    for (int t : {-1, 0, 1})
      if (((n - t) % m + m) % m == 0) return true;
  }
  if (m == k && (k == n - 2 || k == n - 1)) return true;
  if (n >= m && m > k && k > 0 && (n - m) % (m - k) == 0) return true;
  return false;
}

namespace {

std::vector<GeneratorEntry> pairing_entries(const SemidirectSpec& s) {
  std::vector<GeneratorEntry> out;
  for (int a = 1; a <= s.m; ++a)
    for (int b = 1; b <= s.k; ++b) out.push_back({Construction::Pairing, {b, a}, {0, 2}});
  return out;
}

void set_power(ClassificationReport& r, SemiInvariantKind kind, int exponent) {
  r.semi_invariant = exponent == 0 ? SemiInvariantKind::One : kind;
  r.semi_invariant_exponent = exponent == 0 ? 0 : exponent;
}

}  // namespace

ClassificationReport classify(const SemidirectSpec& spec) {
  spec.validate();
  const int n = spec.n, m = spec.m, k = spec.k;
  ClassificationReport r;
  r.spec = spec;

  if (m >= n || (m == k && k == n - 1)) {
    // Generic stabilizer is zero: the answer is the freeness of C[V*]^G.
    r.citation = Citation::Ex0;
    r.polynomial = (k == 0 && m <= n + 1) || (m == n && k < n) || (m == k && k == n - 1);
    if (m == n && k < n) set_power(r, SemiInvariantKind::DetPower, n - 1 - k);
    else if (m == k && k == n - 1) r.semi_invariant = SemiInvariantKind::PrincipalMinorSum;
    else if (m == n && k == n) r.semi_invariant = SemiInvariantKind::Unknown;
    else r.semi_invariant = SemiInvariantKind::One;
    if (r.polynomial) {
      r.generators = pairing_entries(spec);
      if (m >= n)
        for (const auto& sub : subsets(m, n)) r.generators.push_back({Construction::DeltaI, sub, {0, static_cast<unsigned>(n)}});
    }
    return r;
  }

  if (k == 0) {
    r.citation = Citation::Th0;
    auto [q, rem] = quotient_remainder(n, m);
    r.polynomial = rem == 1 || rem == m || rem == m - 1;
    if (!r.polynomial) return r;
    if (rem == m && m >= 2) set_power(r, SemiInvariantKind::FPower, m - 1);
    else r.semi_invariant = SemiInvariantKind::One;
    const Bidegree bd{static_cast<unsigned>(m * q * (q - 1) / 2 + q * rem), static_cast<unsigned>(n)};
    for (const auto& sub : subsets(m, rem)) r.generators.push_back({Construction::F_I, sub, bd});
    return r;
  }

  if (m == k) {
    r.citation = Citation::MEqualsK;
    r.polynomial = k == n - 2;
    r.semi_invariant = SemiInvariantKind::One;
    if (r.polynomial) {
      r.generators = pairing_entries(spec);
      const Rational rest = b_of_q(spec) - 2 * k * k;
      const unsigned total = static_cast<unsigned>(rest.get_num().get_ui());
      r.generators.push_back({Construction::FinderSolution, {}, {2, total - 2}});
    }
    return r;
  }

  if ((n - m) % (m - k) == 0) {
    r.citation = Citation::Divides;
    r.polynomial = true;
    set_power(r, SemiInvariantKind::BoldFPower, m - k - 1);
    const int d = (n - m) / (m - k);
    r.generators = pairing_entries(spec);
    r.generators.push_back({Construction::MixedGlobal,
                            {},
                            {static_cast<unsigned>((m - k) * d * (d + 1) / 2), static_cast<unsigned>(m * (d + 1) + d * k)}});
    return r;
  }

  r.citation = Citation::NDivides;
  r.polynomial = false;
  return r;
}

std::optional<std::vector<InvariantCandidate>> build_generators(const LieAlgebraData& q,
                                                                const ClassificationReport& report) {
  if (!report.polynomial) return std::nullopt;
  switch (report.citation) {
    case Citation::Ex0: return v_invariant_generators(q);
    case Citation::Th0: return all_F_I(q);
    case Citation::Divides: {
      auto global = global_mixed_F(q, std::nullopt);
      if (!global.expected_invariant) return std::nullopt;
      auto out = v_invariant_generators(q);
      out.push_back(std::move(global));
      return out;
    }
    case Citation::MEqualsK: {
      auto out = v_invariant_generators(q);
      const auto& mixed = report.generators.back();
      auto slice = invariant_finder(q, mixed.bidegree);
      if (slice.size() != 1) return std::nullopt;
      out.push_back(std::move(slice.front()));
      return out;
    }
    case Citation::NDivides: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace qinv
