#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qinv/classify.hpp"
#include "qinv/verify.hpp"

namespace qinv {

struct Caps {
  std::size_t dim = kDefaultDimCap;
  std::size_t pfaffian_dim = kDefaultPfaffianDimCap;
  std::size_t minors = kDefaultMinorCap;
  std::size_t finder_slice = kDefaultFinderCap;
  std::size_t tensor = kDefaultTensorCap;
  std::size_t expansion = kDefaultExpansionCap;
  std::size_t products = kDefaultProductCap;

  nlohmann::ordered_json to_json() const;
};

/// Names accepted by --checks, in report order.
const std::vector<std::string>& check_names();

struct RunConfig {
  SemidirectSpec spec;
  std::uint64_t seed = 0;
  Caps caps;
  /// Empty means every check.
  std::set<std::string> checks;
};

/// Every candidate the library constructs for the spec: pairings and Δ_I,
/// F_I, global mixed invariants (one per subset when r < m - k), Δ_i(Y),
/// and the finder's mixed generator for m = k = n - 2.
std::vector<InvariantCandidate> all_candidates(const LieAlgebraData& q, const Caps& caps);

/// Runs the selected checks. CapExceeded propagates.
VerificationReport run_verify(const RunConfig& config);

/// Candidates of one construction: "DeltaI", "Pairing", "F_I", "CharPoly",
/// "MixedGlobal", "MixedRestricted", "Finder" (needs `slice`).
/// Throws Error when the construction does not apply to the spec.
std::vector<InvariantCandidate> emit_construction(const LieAlgebraData& q, const std::string& construction,
                                                  const Caps& caps, std::optional<Bidegree> slice = std::nullopt);

/// The semi-invariant the classification describes, built from the family's
/// constructions; nullopt when the description is "unknown".
std::optional<Poly> described_semi_invariant(const LieAlgebraData& q, const ClassificationReport& report,
                                             const Caps& caps);

/// Envelope shared by every JSON output: schema version, command, config.
nlohmann::ordered_json json_envelope(const std::string& command, const std::optional<SemidirectSpec>& spec,
                                     std::uint64_t seed, const Caps& caps);

}  // namespace qinv
