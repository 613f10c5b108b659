#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qgkm/cartan.hpp"
#include "qgkm/crystal.hpp"
#include "qgkm/linalg.hpp"

namespace qgkm {

/// A weight-graded space over a field K with one degree-lowering endomorphism
/// per index: f_i maps the piece at mu into the piece at mu - alpha_i. Weights
/// are bounded above by finitely many tops, so the descending image filtration
/// of every f_i reaches zero in finitely many steps.
///
/// Only weights with nonzero dimension are stored; a missing lowering matrix
/// means the zero map. The field is pluggable: exact rational functions of q
/// for the quantized models, plain rationals for classical-limit inputs.
template <typename K>
struct PreDualPerfectSpace {
  CartanDatum datum;
  std::vector<Weight> tops;
  std::map<Weight, int> dims;
  std::map<std::pair<int, Weight>, Mat<K>> maps;

  int dim(const Weight& mu) const;
  /// The lowering matrix at mu (dim(mu - alpha_i) rows, dim(mu) columns);
  /// zero matrix when none is stored.
  Mat<K> f(int i, const Weight& mu) const;

  /// Validates the grading: positive dimensions, every weight below some top,
  /// every stored matrix shaped for its weights. Throws InvalidDatum.
  static PreDualPerfectSpace make(CartanDatum d, std::vector<Weight> tops,
                                  std::map<Weight, int> dims,
                                  std::map<std::pair<int, Weight>, Mat<K>> maps);
};

/// A candidate graded basis: one column block per weight, columns in the
/// canonical node order (weights ascending in lattice order, then columns).
template <typename K>
using GradedBasis = std::map<Weight, Mat<K>>;

/// The filtration level of a nonzero vector at mu: the unique n with
/// v inside f_i^n V but outside f_i^{n+1} V. Throws ZeroVector.
template <typename K>
std::int64_t ell(const PreDualPerfectSpace<K>& V, int i, const Weight& mu, const Vec<K>& v);

/// Accepted verification output: per basis element (node) its weight and
/// column, the filtration-level table, the lowering companion maps
/// (f_map[b][i] is the unique basis element whose scalar multiple agrees with
/// f_i(b) modulo two filtration steps down, or -1), their partial inverses,
/// and the canonical scalars.
template <typename K>
struct DualPerfectCertificate {
  std::vector<Weight> wt;                      // node -> weight
  std::vector<int> col;                        // node -> column inside its weight block
  std::map<Weight, std::vector<int>> at;       // weight -> nodes in column order
  std::vector<std::vector<std::int64_t>> ell;  // node x index
  std::vector<std::vector<int>> f_map;         // node x index -> node or -1
  std::vector<std::vector<int>> e_map;         // node x index -> node or -1
  std::vector<std::vector<K>> coeff;           // node x index -> canonical scalar (0 iff f_map -1)

  int size() const { return static_cast<int>(wt.size()); }
};

/// A concrete witness that the candidate basis is not dual perfect: the
/// offending element and index, its weight, and the reason.
struct DualPerfectRefutation {
  int node = -1;
  int index = -1;
  Weight wt;
  std::string reason;
};

template <typename K>
struct DualPerfectOutcome {
  bool accepted = false;
  DualPerfectCertificate<K> certificate;  // meaningful iff accepted
  DualPerfectRefutation refutation;       // meaningful iff not accepted
};

/// Decision procedure for dual perfectness of a graded basis. For each index
/// and each basis element b at filtration level n, the image f_i(b) is
/// expanded over the level-(n+1) basis elements of the target weight modulo
/// level n+2: the basis is dual perfect iff every such expansion touches at
/// most one element, the touched elements are distinct for distinct b, and
/// the level-(n+1) elements are independent modulo level n+2. No search is
/// involved: the companion map is unique whenever it exists.
/// Throws NotABasis when the blocks do not form a graded basis of the space.
template <typename K>
DualPerfectOutcome<K> verify_dual_perfect(const PreDualPerfectSpace<K>& V,
                                          const GradedBasis<K>& B);

/// The colored graph of a certificate: edges from the companion maps, string
/// positions equal to the filtration level on real indices and zero on
/// imaginary ones, and phi = eps + <h_i, wt>.
template <typename K>
AbstractCrystal extract_graph(const CartanDatum& d, const DualPerfectCertificate<K>& cert);

/// Structural consequences of a certificate, re-checked by rank on the actual
/// space: powers of f_i track powers of the companion map modulo deep
/// filtration levels, the level-n subspace is spanned by the n-fold companion
/// images, the filtration level counts companion preimages, it increases by
/// one along the companion map, and each level's elements descend to a basis
/// of the quotient by the next level. Powers are sampled up to max_power.
template <typename K>
CrystalReport companion_power_suite(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                    const DualPerfectCertificate<K>& cert,
                                    std::int64_t max_power);

/// View of a weight-truncated model (module or half algebra) as a graded
/// space over the rational functions of q, with its lowering operators.
PreDualPerfectSpace<Scalar> space_from_model(const ModelOps& M);

/// The distinguished basis of a generated crystal as a graded basis, columns
/// ordered by crystal node id within each weight; node_of maps the canonical
/// node order (weights ascending, then columns) back to crystal node ids.
struct GlobalGradedBasis {
  GradedBasis<Scalar> basis;
  std::vector<int> node_of;
};
GlobalGradedBasis basis_from_global(const ModelOps& M, const GeneratedCrystal& G,
                                    const std::vector<VecQq>& vectors);

}  // namespace qgkm
