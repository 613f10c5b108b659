#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qgkm/cartan.hpp"
#include "qgkm/crystal.hpp"
#include "qgkm/dualperfect.hpp"
#include "qgkm/duality.hpp"
#include "qgkm/global.hpp"
#include "qgkm/halfalg.hpp"
#include "qgkm/hwmodule.hpp"
#include "qgkm/strings.hpp"

namespace qgkm {

using Json = nlohmann::json;

/// Reads and parses a JSON document. UsageError when the file cannot be
/// opened, ParseError when it is not valid JSON.
Json load_json_file(const std::string& path);

/// Canonical dump: two-space indent, keys in insertion order as emitted by
/// the builders here, one trailing newline. All emitted documents go through
/// this, so byte-identical inputs give byte-identical files.
std::string dump_json(const Json& doc);

void write_text_file(const std::string& path, const std::string& text);

// ---- lattice vectors -------------------------------------------------------
Json weight_to_json(const Weight& mu);
/// `what` names the field in error messages; rank is the expected length.
Weight weight_from_json(const Json& v, int rank, const std::string& what);
Json content_to_json(const Content& c);

// ---- scalars and matrices --------------------------------------------------
/// Scalars travel as strings in the reduced-fraction grammar of
/// parse_scalar/to_string; integers are accepted on input for convenience.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& v, const std::string& what);
Json matrix_to_json(const MatQq& m);
/// Rectangular array-of-arrays; ParseError names `what` on ragged rows or bad
/// entries. An empty array is the 0 x 0 matrix.
MatQq matrix_from_json(const Json& v, const std::string& what);

// ---- Cartan datum -----------------------------------------------------------
/// {"A": [[...]], "s": [...], "lattice": {roots, coweights, fundamental}}.
/// The lattice block is optional on input (the minimal realization is built);
/// output always carries it, so round trips are exact.
Json datum_to_json(const CartanDatum& d);
CartanDatum datum_from_json(const Json& doc);

// ---- graded dimension reports ----------------------------------------------
Json halfalg_dims_json(const HalfAlgebra& H);
Json module_dims_json(const HWModule& V);
Json oint_report_json(const OintReport& r);

// ---- crystals ---------------------------------------------------------------
/// {"index_count", "nodes": [{id, wt, eps, phi}], "edges": [{src, dst, color}]}
/// with one edge per lowering arrow and null for a minus-infinity entry.
Json crystal_to_json(const AbstractCrystal& C);
/// Graphviz digraph: node labels "id | wt | eps", one color per index.
std::string crystal_to_dot(const AbstractCrystal& C);

// ---- weight-graded spaces with lowering maps ---------------------------------
struct SpaceFile {
  PreDualPerfectSpace<Scalar> space;
  std::optional<GradedBasis<Scalar>> basis;
};
/// {"datum", "tops", "weights": [{mu, dim}], "f": [{i, mu, matrix}],
///  "basis": [{mu, matrix}]} — `f` and `basis` optional; basis blocks omitted
/// for some weights default to the identity.
SpaceFile space_file_from_json(const Json& doc);
Json space_file_to_json(const PreDualPerfectSpace<Scalar>& V, const GradedBasis<Scalar>* basis);

/// Standalone basis document {"basis": [{mu, matrix}]} against a known space.
GradedBasis<Scalar> graded_basis_from_json(const Json& doc, const PreDualPerfectSpace<Scalar>& V);
Json graded_basis_to_json(const GradedBasis<Scalar>& B);

/// The standard basis: one identity block per weight.
GradedBasis<Scalar> identity_basis(const PreDualPerfectSpace<Scalar>& V);

// ---- verifier and matcher outputs --------------------------------------------
Json certificate_to_json(const DualPerfectCertificate<Scalar>& c);
Json refutation_to_json(const DualPerfectRefutation& r);
Json outcome_to_json(const DualPerfectOutcome<Scalar>& out);
Json crystal_report_to_json(const CrystalReport& r);
Json match_to_json(const MatchOutcome& m);
Json string_data_to_json(const GoodSequence& ib, const DualPerfectCertificate<Scalar>& cert);
Json expansion_report_to_json(const ExpansionReport& r, int index);
Json transpose_duality_to_json(const TransposeDualityReport& r);

}  // namespace qgkm
