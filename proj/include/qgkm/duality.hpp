#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qgkm/cartan.hpp"
#include "qgkm/crystal.hpp"
#include "qgkm/dualperfect.hpp"
#include "qgkm/linalg.hpp"

namespace qgkm {

/// A weight-graded space over a field K with one degree-raising endomorphism
/// per index: e_i maps the piece at mu into the piece at mu + alpha_i.
/// Weights are bounded above by finitely many tops, so iterating e_i on any
/// weight piece leaves the support after finitely many steps and the kernels
/// of the powers of e_i exhaust each weight space.
///
/// Only weights with nonzero dimension are stored; a missing raising matrix
/// means the zero map.
template <typename K>
struct DualSpace {
  CartanDatum datum;
  std::vector<Weight> tops;
  std::map<Weight, int> dims;
  std::map<std::pair<int, Weight>, Mat<K>> maps;

  int dim(const Weight& mu) const;
  /// The raising matrix at mu (dim(mu + alpha_i) rows, dim(mu) columns);
  /// zero matrix when none is stored.
  Mat<K> e(int i, const Weight& mu) const;

  /// Validates the grading and map shapes. Throws InvalidDatum.
  static DualSpace make(CartanDatum d, std::vector<Weight> tops, std::map<Weight, int> dims,
                        std::map<std::pair<int, Weight>, Mat<K>> maps);
};

/// The coordinate dual of a graded space: the same weights and dimensions,
/// with each raising matrix the transpose of the corresponding lowering
/// matrix. The standard dot pairing per weight then satisfies
/// <f_i u, v> = <u, e_i v> bit-exactly.
template <typename K>
DualSpace<K> transpose_space(const PreDualPerfectSpace<K>& V);

/// The inverse direction: transposing twice returns the original space with
/// identical matrices.
template <typename K>
PreDualPerfectSpace<K> transpose_space(const DualSpace<K>& D);

/// The dual basis in coordinates: per weight the inverse transpose of the
/// block, so that column j of the block and column k of the dual block have
/// dot product 1 when j = k and 0 otherwise. Throws NotABasis on a singular
/// block.
template <typename K>
GradedBasis<K> dual_basis(const GradedBasis<K>& B);

/// The vanishing order of a nonzero vector at mu: the largest n such that
/// e_i^n v is nonzero. Throws ZeroVector.
template <typename K>
std::int64_t vanishing_order(const DualSpace<K>& D, int i, const Weight& mu, const Vec<K>& v);

/// Accepted verification output for a raising family: per basis element its
/// weight and column, the vanishing-order table, the raising companion maps
/// (e_map[b][i] is the unique basis element whose scalar multiple agrees with
/// e_i(b) modulo one kernel level down, or -1 when the order is zero), their
/// partial inverses, and the canonical scalars.
template <typename K>
struct PerfectCertificate {
  std::vector<Weight> wt;                        // node -> weight
  std::vector<int> col;                          // node -> column inside its weight block
  std::map<Weight, std::vector<int>> at;         // weight -> nodes in column order
  std::vector<std::vector<std::int64_t>> order;  // node x index
  std::vector<std::vector<int>> e_map;           // node x index -> node or -1
  std::vector<std::vector<int>> f_map;           // node x index -> node or -1
  std::vector<std::vector<K>> coeff;             // node x index -> scalar (0 iff e_map -1)

  int size() const { return static_cast<int>(wt.size()); }
};

/// A concrete witness that the candidate basis is not perfect.
struct PerfectRefutation {
  int node = -1;
  int index = -1;
  Weight wt;
  std::string reason;
};

template <typename K>
struct PerfectOutcome {
  bool accepted = false;
  PerfectCertificate<K> certificate;  // meaningful iff accepted
  PerfectRefutation refutation;       // meaningful iff not accepted
};

/// Decision procedure for perfectness of a graded basis of a raising family.
/// For each index and each basis element b of vanishing order n >= 1, the
/// image e_i(b) is expanded over the order-(n-1) basis elements of the target
/// weight modulo the kernel of e_i^(n-1): the basis is perfect iff every such
/// expansion touches exactly one element, the touched elements are distinct
/// for distinct b, and the order-(n-1) elements are independent modulo the
/// kernel level below them. Elements of order zero need no check: their
/// images are already zero. Throws NotABasis when the blocks do not form a
/// graded basis.
template <typename K>
PerfectOutcome<K> verify_perfect(const DualSpace<K>& D, const GradedBasis<K>& B);

/// Structural consequences of a certificate, re-checked by rank on the
/// actual space: the kernel of every power of e_i is spanned by the elements
/// of smaller order, the order drops by exactly one along the companion map,
/// an element lies in the companion range iff it lies in the image of e_i
/// plus its own kernel level, and the order-n elements descend to a basis of
/// the kernel quotient at each level.
template <typename K>
CrystalReport kernel_level_suite(const DualSpace<K>& D, const GradedBasis<K>& B,
                                 const PerfectCertificate<K>& cert);

/// Roundtrip through the transpose: verify the candidate basis on the primal
/// side and its dual basis on the transposed side. The two outcomes must
/// agree; when both accept, the filtration level must equal the vanishing
/// order node by node, the companion maps and canonical scalars must
/// correspond through the transpose, and the kernel suite must pass.
struct TransposeDualityReport {
  bool primal_accepted = false;
  bool dual_accepted = false;
  CrystalReport report;
};

template <typename K>
TransposeDualityReport check_transpose_duality(const PreDualPerfectSpace<K>& V,
                                               const GradedBasis<K>& B);

}  // namespace qgkm
