#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qinv/invariants.hpp"
#include "qinv/liealg.hpp"

namespace qinv {

enum class Citation { Ex0, Th0, MEqualsK, Divides, NDivides };
std::string to_string(Citation c);  // "ex-0", "th-0", "m=k", "divides", "n-divides"

enum class SemiInvariantKind { One, DetPower, FPower, BoldFPower, PrincipalMinorSum, Unknown };

struct GeneratorEntry {
  Construction construction;
  std::vector<int> subset;  // as in InvariantCandidate
  Bidegree bidegree;
  bool from_w = false;
};

struct ClassificationReport {
  SemidirectSpec spec;
  bool polynomial = false;
  Citation citation = Citation::Ex0;
  /// Expected free generators (empty when not polynomial).
  std::vector<GeneratorEntry> generators;
  SemiInvariantKind semi_invariant = SemiInvariantKind::Unknown;
  /// Exponent for DetPower / FPower / BoldFPower.
  int semi_invariant_exponent = 0;

  /// "1", "det(v)^2", "F^1", "bold-F^0", "principal-minor sum", "unknown".
  std::string semi_invariant_text() const;
  nlohmann::ordered_json to_json() const;
};

/// Case analysis over n >= 2, m >= 1, 0 <= k <= m.
ClassificationReport classify(const SemidirectSpec& spec);

/// Whether the three-case list of the family marks the spec polynomial:
/// k = 0, m <= n + 1, n = -1, 0, 1 mod m; m = k in {n - 2, n - 1};
/// n >= m > k > 0 with (m - k) | (n - m).
bool three_case_list(const SemidirectSpec& spec);

/// Builds the expected generators when they are constructible here: F_I
/// (k = 0, m < n), Δ_I and pairings (generic stabilizer zero), the global mixed
/// invariant with pairings (divides case with d = 1), pairings with the finder's mixed
/// generator (m = k = n - 2). nullopt otherwise.
std::optional<std::vector<InvariantCandidate>> build_generators(const LieAlgebraData& q,
                                                                const ClassificationReport& report);

}  // namespace qinv
