#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qgkm/cartan.hpp"
#include "qgkm/crystal.hpp"
#include "qgkm/dualperfect.hpp"
#include "qgkm/linalg.hpp"

namespace qgkm {

/// Eventually-cyclic index sequence: a finite prefix followed by a repeating
/// block. The block must visit every index, so each index occurs infinitely
/// often.
struct GoodSequence {
  std::vector<int> prefix;
  std::vector<int> block;

  /// The plain cycle 0, 1, ..., index_count-1, 0, 1, ...
  static GoodSequence cyclic(int index_count);
  /// Validates ranges and block coverage; throws BadSequence.
  static GoodSequence make(std::vector<int> prefix, std::vector<int> block, int index_count);

  int at(std::int64_t k) const;  // k-th index, k >= 0
};

/// Eventually-zero sequence of nonnegative integers, stored up to the last
/// nonzero entry.
struct StringDatum {
  std::vector<std::int64_t> values;

  /// Trims trailing zeros; throws BadSequence on a negative entry.
  static StringDatum of(std::vector<std::int64_t> values);
  std::int64_t at(std::int64_t k) const;
  bool operator==(const StringDatum& o) const { return values == o.values; }
  bool operator!=(const StringDatum& o) const { return values != o.values; }
  std::string to_string() const;  // "(2,0,1)"
};

/// Order by the first differing entry (zero-padded). Subspaces attached to
/// data are anti-monotone: a larger datum selects a smaller subspace.
bool lex_less(const StringDatum& a, const StringDatum& b);
bool lex_leq(const StringDatum& a, const StringDatum& b);
/// Map-key order for StringDatum.
struct StringDatumLess {
  bool operator()(const StringDatum& a, const StringDatum& b) const { return lex_less(a, b); }
};

/// A graded subspace, one spanning column block per weight (columns need not
/// be independent; all consumers compare by rank).
template <typename K>
using GradedSpan = std::map<Weight, Mat<K>>;

/// Apply the companion-inverse map at index i to b exactly ell_i(b) times,
/// landing on the element at the top of b's i-string.
/// Throws InvalidDatum when the certificate's raising chain is shorter than
/// its recorded level.
template <typename K>
int top_of_string(int i, int b, const DualPerfectCertificate<K>& cert);

/// Nodes whose levels vanish at every index (nothing raises them).
template <typename K>
std::vector<int> head_nodes(const DualPerfectCertificate<K>& cert);

/// One string-datum walk: datum entry k is the level at the k-th sequence
/// index, after which the walk moves to the top of that string; terminal is
/// the head element the walk ends on.
struct StringWalk {
  StringDatum datum;
  int terminal = -1;
};

/// Walk b upward along the sequence until a head element is reached.
/// Throws NoConvergence when the walk exceeds the bound implied by the
/// certificate size (a corrupted certificate).
template <typename K>
StringWalk string_datum_walk(const GoodSequence& ib, int b, const DualPerfectCertificate<K>& cert);

/// Walks for every node, indexed by node id.
template <typename K>
std::vector<StringWalk> all_string_data(const GoodSequence& ib,
                                        const DualPerfectCertificate<K>& cert);

/// The graded span sum_i f_i(V): per weight, the union of the images of all
/// lowering maps into it.
template <typename K>
GradedSpan<K> lowered_sum(const PreDualPerfectSpace<K>& V);

/// The two subspaces attached to a datum L along the sequence ib:
/// `subspace_gt` sums, over positions k, the images of
/// f_{i_1}^{l_1} ... f_{i_{k-1}}^{l_{k-1}} f_{i_k}^{1+l_k} applied to the
/// whole space; `subspace_geq` additionally adds the un-incremented image at
/// the stabilization length (support end plus one full block).
template <typename K>
GradedSpan<K> subspace_gt(const PreDualPerfectSpace<K>& V, const GoodSequence& ib,
                          const StringDatum& L);
template <typename K>
GradedSpan<K> subspace_geq(const PreDualPerfectSpace<K>& V, const GoodSequence& ib,
                           const StringDatum& L);

/// Rank-level checks tying string data to the subspaces, for every datum
/// realized by the basis: the at-least/strictly-above subspaces equal the
/// spans of the elements whose datum is at least/strictly above L; walks of
/// distinct elements with one datum end on distinct heads; the elements of
/// one datum are a basis of the quotient of the two subspaces; the operator
/// word along L applied to a head agrees, up to a nonzero scalar and modulo
/// the strictly-above subspace, with the companion word, and those images
/// exhaust the quotient basis up to scalars; subspace inclusions are
/// anti-monotone across realized data.
template <typename K>
CrystalReport check_string_spans(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                 const DualPerfectCertificate<K>& cert, const GoodSequence& ib);

/// Checks that head elements project to a basis of V / sum_i f_i(V) and that
/// every non-head element projects to zero.
template <typename K>
CrystalReport check_head_projection(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                    const DualPerfectCertificate<K>& cert);

/// Result of matching two dual perfect bases: psi maps certificate nodes of
/// the first basis to certificate nodes of the second, and the verification
/// report re-checks that psi is a graph isomorphism preserving string data
/// and head residues.
struct MatchOutcome {
  std::vector<int> psi;
  CrystalReport verification;
};

/// Match two verified certificates over one space: requires the head
/// residues of the two bases to agree exactly as sets (else
/// HypothesisFailed), then matches elements datum by datum through the
/// quotients, requiring each change-of-basis matrix to be monomial (else
/// NotMonomial).
template <typename K>
MatchOutcome match_with_certificates(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                     const DualPerfectCertificate<K>& cb,
                                     const GradedBasis<K>& B2,
                                     const DualPerfectCertificate<K>& cb2,
                                     const GoodSequence& ib);

/// Verify both bases dual perfect (HypothesisFailed quoting the refutation
/// otherwise), then match their certificates.
template <typename K>
MatchOutcome match_dual_perfect_bases(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                      const GradedBasis<K>& B2, const GoodSequence& ib);

}  // namespace qgkm
