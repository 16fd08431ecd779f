#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qinv/polymatrix.hpp"

namespace qinv {

/// Parameters of q = sl_n ⋉ (m copies of the dual (C^n)* plus k copies of C^n).
struct SemidirectSpec {
  int n = 2;
  int m = 1;
  int k = 0;

  /// Throws Error unless n >= 2, m >= 1, 0 <= k <= m.
  void validate() const;
  int dim_g() const { return n * n - 1; }
  int dim_v() const { return (m + k) * n; }
  int dim() const { return dim_g() + dim_v(); }
  std::string to_string() const;  // "n,m,k"
  bool operator==(const SemidirectSpec&) const = default;
};

/// Parses "n,m,k".
SemidirectSpec parse_spec(const std::string& text);

enum class BasisKind : std::uint8_t { E, H, Covector, Vector };

/// E: E_ij (i != j); H: H_i = E_ii - E_{i+1,i+1} (i in j unused);
/// Covector: copy a, dual basis vector e_j^*; Vector: copy b, basis vector e_j.
/// All indices 1-based.
struct BasisLabel {
  BasisKind kind;
  int i;
  int j;
  std::string to_string() const;
};

using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

/// Basis and structure constants of q. Basis order: E_ij (row-major,
/// i != j), H_1..H_{n-1}, covector copies (a, j), vector copies (b, j).
/// Coordinate functions on q* are the basis elements themselves: variable
/// number t of the polynomial context is basis element t.
class LieAlgebraData {
 public:
  const SemidirectSpec& spec() const { return spec_; }
  std::size_t dim() const { return labels_.size(); }
  std::size_t dim_g() const { return dim_g_; }
  std::size_t dim_v() const { return labels_.size() - dim_g_; }
  const std::vector<BasisLabel>& labels() const { return labels_; }
  const ContextPtr& context() const { return ctx_; }

  /// [basis i, basis j] as a sparse combination of basis elements.
  const SparseVector& bracket(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }

  std::size_t index_E(int i, int j) const;
  std::size_t index_H(int i) const;
  std::size_t index_covector(int a, int j) const;
  std::size_t index_vector(int b, int j) const;

  /// Text table "(i,j) -> [(k, c), ...]" over i < j with nonzero bracket, 1-based.
  std::string structure_constants_text() const;

 private:
  friend LieAlgebraData build_semidirect(const SemidirectSpec& spec, std::size_t dim_cap);
  SemidirectSpec spec_;
  std::size_t dim_g_ = 0;
  std::vector<BasisLabel> labels_;
  std::vector<SparseVector> table_;
  ContextPtr ctx_;
};

inline constexpr std::size_t kDefaultDimCap = 200;
/// Exhaustive Jacobi verification up to this dimension, sampled above.
inline constexpr std::size_t kJacobiExhaustiveDim = 20;

/// Builds q; verifies antisymmetry and the Jacobi identity.
LieAlgebraData build_semidirect(const SemidirectSpec& spec, std::size_t dim_cap = kDefaultDimCap);

/// Jacobi identity over all triples (exhaustive) or `samples` seeded random triples.
bool jacobi_holds(const LieAlgebraData& q, bool exhaustive, std::size_t samples = 0, std::uint64_t seed = 0);

PolyMatrix structure_matrix(const LieAlgebraData& q);

/// Coadjoint derivation by basis element i: sum_{j,k} c_ij^k x_k dF/dx_j.
Poly lie_derivative(const LieAlgebraData& q, std::size_t i, const Poly& f);

/// n x n matrix A identified with the g-coordinates through the trace form:
/// A_ji = x(E_ij), diagonal recovered from the H_i coordinates with trace 0.
PolyMatrix g_matrix(const LieAlgebraData& q);
/// n x m matrix whose column a is the point of copy a of C^n (coordinates of the covector part).
PolyMatrix covector_matrix(const LieAlgebraData& q);
/// k x n matrix whose row b is the point of copy b of (C^n)* (coordinates of the vector part).
PolyMatrix vector_matrix(const LieAlgebraData& q);

/// Seeded integer point with coordinates in [-bound, bound]. Uses mt19937_64
/// and a modulo reduction so the sequence is identical on every platform.
std::vector<Rational> random_point(std::size_t size, std::uint64_t seed, std::uint64_t trial, int bound = 100);

inline constexpr int kDefaultTrials = 5;
inline constexpr int kPointBound = 100;

/// dim q - max rank of M(q) over seeded random points.
int index_by_rank(const LieAlgebraData& q, int trials = kDefaultTrials, std::uint64_t seed = 0);
/// Rank of M(q) at the seeded random points (max over trials).
std::size_t generic_rank(const LieAlgebraData& q, int trials = kDefaultTrials, std::uint64_t seed = 0);

enum class StabilizerKind { Zero, SemidirectDual, Special };

/// Generic stabilizer g_x of g on V*. For SemidirectDual, g_x is sl_{n'} ⋉ m'C^{n'}
/// with (n', m') = (n - m, m - k); n' = 1 means the abelian algebra of dim m'.
/// For Special it is sl_{n-k}.
struct GenericStabilizerSpec {
  StabilizerKind kind;
  std::string description;
  int dim_gx;
  int ind_gx;
  Rational b_gx;
  std::optional<SemidirectSpec> inner;  // for SemidirectDual with n' >= 2, as (n', m', 0)
};

GenericStabilizerSpec generic_stabilizer(const SemidirectSpec& spec);
/// dim V - (dim g - dim g_x) + ind g_x, recursing through the stabilizer.
int index_by_rais(const SemidirectSpec& spec);
/// (ind q + dim q) / 2 with the index from the recursive formula.
Rational b_of_q(const SemidirectSpec& spec);

struct SemiInvariantResult {
  Poly p;
  std::size_t rank = 0;
  std::size_t minors_total = 0;
  std::size_t minors_used = 0;     // nonzero Pfaffians fed into the gcd
  std::size_t minors_zero = 0;     // zero Pfaffians (on the line when p = 1 is certified there)
  std::size_t minors_skipped = 0;  // not examined after the gcd reached 1
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultPfaffianDimCap = 40;
inline constexpr std::size_t kDefaultMinorCap = 5000;

/// GCD of the Pfaffians of the principal minors of M(q) of size rank M(q).
/// A first pass restricts every Pfaffian to one seeded random line modulo a
/// 61-bit prime; when the gcd of the restrictions reaches degree 0 the exact
/// gcd is 1 and nothing is expanded. Otherwise every Pfaffian is expanded and
/// folded into an exact gcd. Throws CapExceeded("minors") when the first pass
/// would examine more than minor_cap minors.
SemiInvariantResult fundamental_semi_invariant(const LieAlgebraData& q, std::uint64_t seed = 0,
                                               std::size_t dim_cap = kDefaultPfaffianDimCap,
                                               std::size_t minor_cap = kDefaultMinorCap);

}  // namespace qinv
