#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgkm/cartan.hpp"
#include "qgkm/halfalg.hpp"
#include "qgkm/hwmodule.hpp"
#include "qgkm/linalg.hpp"
#include "qgkm/scalar.hpp"

namespace qgkm {

/// Uniform operator view of a weight-graded model: per-content dimensions and
/// lowering/raising matrices between the chosen bases. `raise` is the operator
/// whose kernel anchors the string decomposition (module raising operator for
/// a highest-weight module, the left derivation for the half algebra).
/// The view borrows the underlying model; keep it alive while the view is.
struct ModelOps {
  const CartanDatum* datum = nullptr;
  int depth = 0;
  std::function<int(const Content&)> dim;
  std::function<Weight(const Content&)> weight;
  std::function<MatQq(int, const Content&)> lower;
  std::function<MatQq(int, const Content&)> raise;
  /// Largest exponent k such that the k-th divided lowering power may be
  /// nonzero on kernel vectors at this content (everything is allowed in the
  /// half algebra; modules cut strings by the weight pairing).
  std::function<std::int64_t(int, const Content&)> string_cap;
  /// All stored monomial words at a content and the coordinates of one such
  /// word over the chosen basis.
  std::function<const std::vector<Word>&(const Content&)> words_at;
  std::function<VecQq(const Content&, const Word&)> expand_word;
};

ModelOps module_ops(const HWModule& V);
ModelOps halfalg_ops(const HalfAlgebra& H);

/// Matrix of the k-th divided lowering power f_i^{(k)} (f_i^k / [k]_i! for a
/// real index, plain f_i^k for an imaginary one) from `from` to
/// `from + k*alpha_i`.
MatQq divided_power_matrix(const ModelOps& M, int i, int k, const Content& from);

/// One kernel component of the string decomposition: `component` lives at
/// content `beta - exponent*alpha_i` and is annihilated by the raising
/// operator; the decomposed vector is the sum of the divided lowering powers
/// applied to the components.
struct StringPart {
  int exponent = 0;
  VecQq component;
};

std::vector<StringPart> string_decompose(const ModelOps& M, int i, const Content& beta,
                                         const VecQq& v);

/// A vector of the model tagged with the content it lives at.
struct ModelVec {
  Content content;
  VecQq coords;
};

/// Kashiwara operators: reindex the string decomposition one step up or down.
/// Both return nullopt exactly when the result is the zero vector; the lower
/// direction throws TruncationEscape when the target height exceeds the depth.
std::optional<ModelVec> kashiwara_raise(const ModelOps& M, int i, const Content& beta,
                                        const VecQq& v);
std::optional<ModelVec> kashiwara_lower(const ModelOps& M, int i, const Content& beta,
                                        const VecQq& v);

/// Integer extended with -infinity (nullopt).
using ExtInt = std::optional<std::int64_t>;
inline ExtInt ext_add(const ExtInt& a, std::int64_t shift) {
  if (!a) return a;
  return *a + shift;
}
std::string ext_to_string(const ExtInt& a);

/// Plain colored-graph container for a crystal: nodes are 0..size()-1, edge
/// targets use -1 for "maps to zero".
struct AbstractCrystal {
  int index_count = 0;
  std::vector<Weight> wt;
  std::vector<std::vector<ExtInt>> eps;  // node x index
  std::vector<std::vector<ExtInt>> phi;  // node x index
  std::vector<std::vector<int>> e_to;    // node x index -> node or -1
  std::vector<std::vector<int>> f_to;    // node x index -> node or -1

  int size() const { return static_cast<int>(wt.size()); }
};

struct CrystalReport {
  bool passed = true;
  std::vector<std::string> violations;
};

/// The lattice-level data behind a generated crystal: per content the list of
/// generator vectors (in the model's basis) in creation order, and per node
/// its exact representative plus its residue at q=0 over those generators
/// (trailing zeros trimmed, so residues of one content are comparable).
struct LatticeState {
  std::map<Content, MatQq> generators;
  std::vector<Content> node_content;
  std::vector<VecQq> node_vector;
  std::vector<std::vector<Rational>> node_residue;
};

struct GeneratedCrystal {
  AbstractCrystal crystal;
  LatticeState lattice;
};

/// Breadth-first closure of the canonical seed (the unit vector of the empty
/// content) under the lowering Kashiwara operators, within the depth. Node
/// identity is the exact residue of the vector over the growing generator
/// list; a residue with a pole, or one that is neither zero, nor a previous
/// node, nor a new independent direction, throws LatticeViolation.
GeneratedCrystal generate_crystal(const ModelOps& M);

/// Residue of a vector over the generators recorded for its content.
/// Throws LatticeViolation on a pole and Error when outside their span.
std::vector<Rational> lattice_residue(const LatticeState& L, const Content& beta, const VecQq& w);

/// Verify the six abstract-crystal axioms, including the split real/imaginary
/// bookkeeping along edges.
CrystalReport check_crystal_axioms(const CartanDatum& d, const AbstractCrystal& C);

/// Verify the two defining clauses of a crystal morphism A -> B given as a
/// node map with -1 for "maps to zero".
CrystalReport check_morphism(const CartanDatum& d, const AbstractCrystal& A,
                             const AbstractCrystal& B, const std::vector<int>& psi);

/// A morphism that is everywhere defined, bijective, and whose inverse is
/// again a morphism.
CrystalReport check_isomorphism(const CartanDatum& d, const AbstractCrystal& A,
                                const AbstractCrystal& B, const std::vector<int>& psi);

}  // namespace qgkm
