#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qinv/liealg.hpp"
#include "qinv/packed.hpp"

namespace qinv {

enum class Construction { DeltaI, Pairing, F_I, CharPoly, MixedRestricted, MixedGlobal, FinderSolution };

std::string to_string(Construction c);

struct InvariantCandidate {
  Poly poly;
  /// Declared bidegree; nullopt when the construction is not bihomogeneous.
  std::optional<Bidegree> bidegree;
  Construction construction;
  /// Subset I (1-based) for DeltaI/F_I/Mixed*, {i} for CharPoly, {b, a} for Pairing.
  std::vector<int> subset;
  /// False for constructions that are only SL_n-invariant.
  bool expected_invariant = true;
  std::string normalization;
  /// DeltaI built from rows of w rather than columns of v.
  bool from_w = false;

  /// E.g. "F_I{1,2}", "CharPoly{3}", "Pairing{w1,v2}", "DeltaI_w{1,2}".
  std::string label() const;
};

/// Lexicographic r-subsets of {1..m}.
std::vector<std::vector<int>> subsets(int m, int r);

/// Generators of C[V*]^G for the family (see InvariantCandidate tags DeltaI / Pairing):
/// minors of size n of v (and of w when k >= n) and the m*k pairings <w_b, v_a>.
std::vector<InvariantCandidate> v_invariant_generators(const LieAlgebraData& q);

/// n = q m + r with 0 < r <= m; returns {q, r}.
std::pair<int, int> quotient_remainder(int n, int m);

inline constexpr std::size_t kDefaultExpansionCap = 1000000000;

/// det(v | Av | ... | A^{q-1} v | A^q v_I) for k = 0, m < n, |I| = r. Throws
/// CapExceeded when the product of the column sizes exceeds expansion_cap.
InvariantCandidate build_F_I(const LieAlgebraData& q, const std::vector<int>& subset,
                             std::size_t expansion_cap = kDefaultExpansionCap);
/// The same determinant with A replaced by n A (integer coefficients), so the
/// result is n^{deg_g} F_I; expanded in packed form for the largest cases.
PackedPoly build_F_I_packed(const LieAlgebraData& q, const std::vector<int>& subset);
/// All F_I in lexicographic order of I.
std::vector<InvariantCandidate> all_F_I(const LieAlgebraData& q);

/// det(A_- | beta A_- | ... | beta^{q-2} A_- | beta^{q-1} A_{-,I}) with A_- the
/// lower-left (n-m) x m block and beta the lower-right block of A.
Poly restricted_F_I(const LieAlgebraData& q, const std::vector<int>& subset);

/// Coefficients of the characteristic polynomial of Y = [[A, v], [w, 0]]
/// (sums of principal minors) of degrees 2k+1 .. n+k, for 0 < k = m <= n-1.
std::vector<InvariantCandidate> charpoly_invariants(const LieAlgebraData& q);

/// Sum of principal i x i minors of a square matrix (cofactor route).
Poly principal_minor_sum(const PolyMatrix& y, std::size_t i);
/// Same coefficients through Newton's identities on traces of powers.
std::vector<Poly> charpoly_coefficients(const PolyMatrix& y);

/// n - k = d (m - k) + r with 0 < r <= m - k; returns {d, r}.
std::pair<int, int> mixed_d_r(const SemidirectSpec& spec);

/// det(U | beta U | ... | beta^{d-1} U), or with the last block beta^{d-1} U_J
/// when r < m - k (J = I minus {1..k}). U: rows m+1..n, columns k+1..m; beta:
/// rows and columns m+1..n. Returns zero when I does not contain {1..k}.
Poly mixed_restricted_F(const LieAlgebraData& q, const std::optional<std::vector<int>>& subset);

inline constexpr std::size_t kDefaultTensorCap = 500;

/// Diagnostics of the equivariant solve behind global_mixed_F.
struct MixedGlobalInfo {
  std::size_t tensor_dim = 0;
  std::size_t module_dim = 0;     // dim of the Cartan component
  std::size_t unknowns = 0;
  std::size_t solution_dim = 0;   // must be 1
};

/// The polynomial obtained by pairing phi(v) ⊗ rho(A)^{m-k} phi(v) ⊗ ... with
/// phi~(w)^d through the equivariant map onto the Cartan component of
/// S^d(Λ^k C^n). Normalized. Always SL_n-invariant; V-invariant for d = 1.
/// For d >= 2 the restriction to g + (E_m + E_k) keeps products A_{i1} A_{1j}
/// (through the first k basis vectors) and the candidate is flagged
/// expected_invariant = false; (4,2,1) is the smallest such case.
InvariantCandidate global_mixed_F(const LieAlgebraData& q, const std::optional<std::vector<int>>& subset,
                                  std::size_t tensor_cap = kDefaultTensorCap, MixedGlobalInfo* info = nullptr);

inline constexpr std::size_t kDefaultFinderCap = 50000;

/// Basis (reduced echelon form over the weight-zero monomials of the slice)
/// of the invariants of bidegree (a, b). Normalized.
std::vector<InvariantCandidate> invariant_finder(const LieAlgebraData& q, Bidegree slice,
                                                 std::size_t slice_cap = kDefaultFinderCap);

/// Whether `f` lies in the span of `basis` (exact linear solve).
bool in_span(const Poly& f, const std::vector<InvariantCandidate>& basis);

}  // namespace qinv
