#pragma once

#include <map>
#include <string>
#include <vector>

#include "qgkm/crystal.hpp"
#include "qgkm/linalg.hpp"

namespace qgkm {

/// The distinguished basis attached to a generated crystal: per node, the
/// unique bar-fixed vector of the integral form congruent to the node modulo
/// q times the crystal lattice. Solved by height: each node's candidate is a
/// divided lowering power of an already-solved vector one string up, and the
/// candidates at a content are corrected by a rational elimination so each
/// residue hits exactly one node.
/// The integral form at one content: the Q[q, q^-1]-span of the divided-power
/// monomial images. Their coordinates over the chosen basis carry honest
/// denominators (quantum factorials), so the triangular Laurent basis is
/// stored for the span multiplied by a common denominator `scale`; membership
/// of a vector v in the span is tested as scale * v against it.
struct IntegralSpan {
  laurent::HermiteBasis basis;
  Scalar scale{1};
  bool member(const VecQq& v) const;
};

struct GlobalBasis {
  /// One vector per crystal node, in model coordinates at the node's content.
  std::vector<VecQq> vectors;
  /// Per content: the integral form at that content.
  std::map<Content, IntegralSpan> integral;
};

/// Coordinates of the divided-power monomial image of a word: the word's
/// expansion divided by the quantum factorials of its maximal runs of equal
/// real letters (imaginary runs carry no factorial).
VecQq divided_monomial(const ModelOps& M, const Content& beta, const Word& w);

/// The integral form at a content: the span of all divided-power monomial
/// images over Q[q, q^-1].
IntegralSpan integral_basis(const ModelOps& M, const Content& beta);

/// Solve every node of the generated crystal. Throws NoConvergence when the
/// solved-by-height recursion cannot complete (a candidate escapes the
/// lattice, a raising walk is shorter than the recorded string position, or
/// the candidates fail to separate the nodes of a content).
GlobalBasis solve_global_basis(const ModelOps& M, const GeneratedCrystal& G);

struct GlobalReport {
  bool passed = false;
  std::vector<std::string> violations;
};

/// Defining and structural invariants of the solved basis: each vector is
/// fixed by bar, lies in the integral form, is congruent to its node modulo
/// q times the lattice, and the vectors at each content form a basis.
GlobalReport check_global_invariants(const ModelOps& M, const GeneratedCrystal& G,
                                     const GlobalBasis& GB);

/// One term of the expansion of a lowered basis vector over the basis one
/// content deeper: f_i applied to the vector of `src` picks up `coeff` times
/// the vector of `dst`.
struct ExpansionTerm {
  int src = -1;
  int dst = -1;
  Scalar coeff;
};

struct ExpansionReport {
  bool passed = false;
  std::vector<std::string> violations;
  /// Terms beyond the expected leading one, per lowered node.
  std::vector<ExpansionTerm> corrections;
};

/// Expand f_i times each basis vector over the basis one content deeper and
/// verify the shape: for a real index the edge target carries coefficient
/// [1 + eps_i(src)]_i and every correction lands on a node with strictly
/// larger string position than that; for an imaginary index the expansion is
/// exactly the edge target with coefficient 1. Correction coefficients must
/// be Laurent polynomials. Nodes whose lowering leaves the truncation are
/// skipped.
ExpansionReport check_expansion(const ModelOps& M, const GeneratedCrystal& G,
                                const GlobalBasis& GB, int i);

/// Verify, content by content, that the basis vectors whose raising walk in
/// color i has length >= n span the same Q[q, q^-1]-lattice as the images of
/// all k-fold divided lowerings of the integral form with k >= n. The walk
/// length equals the string position for a real index.
GlobalReport check_filtration(const ModelOps& M, const GeneratedCrystal& G, const GlobalBasis& GB,
                              int i, std::int64_t n);

}  // namespace qgkm
