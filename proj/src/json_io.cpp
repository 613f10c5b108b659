#include "qgkm/json_io.hpp"

#include <fstream>
#include <sstream>

#include "qgkm/errors.hpp"

namespace qgkm {

namespace {

MatI int_matrix_from_json(const Json& v, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + " must be an array of rows");
  const int rows = static_cast<int>(v.size());
  int cols = -1;
  for (const Json& row : v) {
    if (!row.is_array()) throw ParseError(what + " must be an array of rows");
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols) throw ParseError(what + " has ragged rows");
  }
  MatI m(rows, cols < 0 ? 0 : cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < m.cols(); ++c) {
      const Json& e = v[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (!e.is_number_integer() && !e.is_number_unsigned())
        throw ParseError(what + " has a non-integer entry");
      m(r, c) = e.get<std::int64_t>();
    }
  return m;
}

Json int_matrix_to_json(const MatI& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json ext_to_json(const ExtInt& a) {
  if (!a) return nullptr;
  return *a;
}

void require_object(const Json& doc, const std::string& what) {
  if (!doc.is_object()) throw ParseError(what + " must be a JSON object");
}

const Json& field(const Json& doc, const char* key, const std::string& what) {
  if (!doc.contains(key)) throw ParseError(what + " is missing the key '" + key + "'");
  return doc.at(key);
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("file " + path + " is not valid JSON: " + e.what());
  }
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file " + path);
  out << text;
  if (!out) throw UsageError("failed writing output file " + path);
}

// ---- lattice vectors -------------------------------------------------------

Json weight_to_json(const Weight& mu) {
  Json v = Json::array();
  for (int k = 0; k < mu.size(); ++k) v.push_back(mu[k]);
  return v;
}

Weight weight_from_json(const Json& v, int rank, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + " must be an array of integers");
  if (static_cast<int>(v.size()) != rank)
    throw ParseError(what + " has length " + std::to_string(v.size()) + ", expected " +
                     std::to_string(rank));
  Weight mu = Weight::zero(rank);
  for (int k = 0; k < rank; ++k) {
    const Json& e = v[static_cast<std::size_t>(k)];
    if (!e.is_number_integer() && !e.is_number_unsigned())
      throw ParseError(what + " has a non-integer entry");
    mu[k] = e.get<std::int64_t>();
  }
  return mu;
}

Json content_to_json(const Content& c) {
  Json v = Json::array();
  for (std::int64_t x : c) v.push_back(x);
  return v;
}

// ---- scalars and matrices --------------------------------------------------

Json scalar_to_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from_json(const Json& v, const std::string& what) {
  if (v.is_number_integer() || v.is_number_unsigned()) return Scalar(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return parse_scalar(v.get<std::string>());
    } catch (const Error& e) {
      throw ParseError(what + ": " + e.what());
    }
  }
  throw ParseError(what + " must be a scalar string or an integer");
}

Json matrix_to_json(const MatQq& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatQq matrix_from_json(const Json& v, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + " must be an array of rows");
  const int rows = static_cast<int>(v.size());
  int cols = -1;
  for (const Json& row : v) {
    if (!row.is_array()) throw ParseError(what + " must be an array of rows");
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols) throw ParseError(what + " has ragged rows");
  }
  MatQq m(rows, cols < 0 ? 0 : cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < m.cols(); ++c)
      m(r, c) = scalar_from_json(v[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                 what + " entry (" + std::to_string(r) + "," + std::to_string(c) +
                                     ")");
  return m;
}

// ---- Cartan datum -----------------------------------------------------------

Json datum_to_json(const CartanDatum& d) {
  std::vector<std::int64_t> s;
  for (int i = 0; i < d.size(); ++i) s.push_back(d.sym(i));
  Json lattice{{"roots", int_matrix_to_json(d.alpha_matrix())},
               {"coweights", int_matrix_to_json(d.coweight_matrix())},
               {"fundamental", int_matrix_to_json(d.fundamental_matrix())}};
  MatI A(d.size(), d.size());
  for (int i = 0; i < d.size(); ++i)
    for (int j = 0; j < d.size(); ++j) A(i, j) = d.a(i, j);
  return Json{{"A", int_matrix_to_json(A)}, {"s", s}, {"lattice", std::move(lattice)}};
}

CartanDatum datum_from_json(const Json& doc) {
  require_object(doc, "datum");
  const MatI A = int_matrix_from_json(field(doc, "A", "datum"), "datum field 'A'");
  const Json& sv = field(doc, "s", "datum");
  if (!sv.is_array()) throw ParseError("datum field 's' must be an array of integers");
  std::vector<std::int64_t> s;
  for (const Json& e : sv) {
    if (!e.is_number_integer() && !e.is_number_unsigned())
      throw ParseError("datum field 's' has a non-integer entry");
    s.push_back(e.get<std::int64_t>());
  }
  if (!doc.contains("lattice")) return CartanDatum::make(A, s);
  const Json& lat = doc.at("lattice");
  require_object(lat, "datum field 'lattice'");
  return CartanDatum::make(
      A, s, int_matrix_from_json(field(lat, "roots", "lattice"), "lattice field 'roots'"),
      int_matrix_from_json(field(lat, "coweights", "lattice"), "lattice field 'coweights'"),
      int_matrix_from_json(field(lat, "fundamental", "lattice"), "lattice field 'fundamental'"));
}

// ---- graded dimension reports ----------------------------------------------

namespace {

template <typename Model>
Json dims_entries(const Model& M) {
  Json entries = Json::array();
  for (const Content& c : M.contents())
    entries.push_back(Json{{"content", content_to_json(c)},
                           {"weight", weight_to_json(M.weight_of(c))},
                           {"dim", M.dim(c)}});
  return entries;
}

}  // namespace

Json halfalg_dims_json(const HalfAlgebra& H) {
  std::int64_t total = 0;
  for (const Content& c : H.contents()) total += H.dim(c);
  return Json{{"model", "half-algebra"},
              {"depth", H.depth()},
              {"total", total},
              {"entries", dims_entries(H)}};
}

Json module_dims_json(const HWModule& V) {
  return Json{{"model", "module"},
              {"depth", V.depth()},
              {"lambda", weight_to_json(V.highest_weight())},
              {"total", V.total_dim()},
              {"entries", dims_entries(V)}};
}

Json oint_report_json(const OintReport& r) {
  return Json{{"passed", r.passed}, {"violations", r.violations},
              {"indeterminate", r.indeterminate}};
}

// ---- crystals ---------------------------------------------------------------

Json crystal_to_json(const AbstractCrystal& C) {
  Json nodes = Json::array();
  for (int b = 0; b < C.size(); ++b) {
    Json eps = Json::array(), phi = Json::array();
    for (int i = 0; i < C.index_count; ++i) {
      eps.push_back(ext_to_json(C.eps[b][i]));
      phi.push_back(ext_to_json(C.phi[b][i]));
    }
    nodes.push_back(Json{{"id", b},
                         {"wt", weight_to_json(C.wt[b])},
                         {"eps", std::move(eps)},
                         {"phi", std::move(phi)}});
  }
  Json edges = Json::array();
  for (int b = 0; b < C.size(); ++b)
    for (int i = 0; i < C.index_count; ++i)
      if (C.f_to[b][i] >= 0) edges.push_back(Json{{"src", b}, {"dst", C.f_to[b][i]}, {"color", i}});
  return Json{{"index_count", C.index_count}, {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
}

std::string crystal_to_dot(const AbstractCrystal& C) {
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                  "#66a61e", "#e6ab02", "#a6761d", "#666666"};
  constexpr int palette_size = 8;
  std::ostringstream out;
  out << "digraph crystal {\n  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (int b = 0; b < C.size(); ++b) {
    out << "  n" << b << " [label=\"" << b << " | wt=" << C.wt[b].to_string() << " | eps=(";
    for (int i = 0; i < C.index_count; ++i)
      out << (i ? "," : "") << ext_to_string(C.eps[b][i]);
    out << ")\"];\n";
  }
  for (int b = 0; b < C.size(); ++b)
    for (int i = 0; i < C.index_count; ++i)
      if (C.f_to[b][i] >= 0)
        out << "  n" << b << " -> n" << C.f_to[b][i] << " [label=\"" << i << "\", color=\""
            << palette[i % palette_size] << "\"];\n";
  out << "}\n";
  return out.str();
}

// ---- weight-graded spaces with lowering maps ---------------------------------

SpaceFile space_file_from_json(const Json& doc) {
  require_object(doc, "space document");
  CartanDatum d = datum_from_json(field(doc, "datum", "space document"));
  const int rank = d.lattice_rank();

  const Json& tv = field(doc, "tops", "space document");
  if (!tv.is_array() || tv.empty())
    throw ParseError("space field 'tops' must be a nonempty array of weights");
  std::vector<Weight> tops;
  for (std::size_t k = 0; k < tv.size(); ++k)
    tops.push_back(weight_from_json(tv[k], rank, "top weight " + std::to_string(k)));

  const Json& wv = field(doc, "weights", "space document");
  if (!wv.is_array()) throw ParseError("space field 'weights' must be an array");
  std::map<Weight, int> dims;
  for (const Json& entry : wv) {
    require_object(entry, "weights entry");
    Weight mu = weight_from_json(field(entry, "mu", "weights entry"), rank, "weight entry 'mu'");
    const Json& dim = field(entry, "dim", "weights entry");
    if (!dim.is_number_integer() && !dim.is_number_unsigned())
      throw ParseError("weights entry 'dim' must be an integer");
    if (dims.count(mu)) throw ParseError("duplicate weight " + mu.to_string() + " in 'weights'");
    dims[mu] = dim.get<int>();
  }

  std::map<std::pair<int, Weight>, MatQq> maps;
  if (doc.contains("f")) {
    const Json& fv = doc.at("f");
    if (!fv.is_array()) throw ParseError("space field 'f' must be an array");
    for (const Json& entry : fv) {
      require_object(entry, "lowering-map entry");
      const Json& iv = field(entry, "i", "lowering-map entry");
      if (!iv.is_number_integer() && !iv.is_number_unsigned())
        throw ParseError("lowering-map entry 'i' must be an integer");
      const int i = iv.get<int>();
      Weight mu =
          weight_from_json(field(entry, "mu", "lowering-map entry"), rank, "lowering-map 'mu'");
      if (maps.count({i, mu}))
        throw ParseError("duplicate lowering map for index " + std::to_string(i) + " at " +
                         mu.to_string());
      maps[{i, mu}] =
          matrix_from_json(field(entry, "matrix", "lowering-map entry"), "lowering-map matrix");
    }
  }

  SpaceFile out{PreDualPerfectSpace<Scalar>::make(std::move(d), std::move(tops), std::move(dims),
                                                  std::move(maps)),
                std::nullopt};
  if (doc.contains("basis"))
    out.basis = graded_basis_from_json(Json{{"basis", doc.at("basis")}}, out.space);
  return out;
}

Json space_file_to_json(const PreDualPerfectSpace<Scalar>& V, const GradedBasis<Scalar>* basis) {
  Json weights = Json::array();
  for (const auto& [mu, n] : V.dims)
    weights.push_back(Json{{"mu", weight_to_json(mu)}, {"dim", n}});
  Json tops = Json::array();
  for (const Weight& t : V.tops) tops.push_back(weight_to_json(t));
  Json f = Json::array();
  for (const auto& [key, m] : V.maps) {
    if (m.rows() == 0 || m.cols() == 0) continue;
    f.push_back(
        Json{{"i", key.first}, {"mu", weight_to_json(key.second)}, {"matrix", matrix_to_json(m)}});
  }
  Json doc{{"datum", datum_to_json(V.datum)},
           {"tops", std::move(tops)},
           {"weights", std::move(weights)},
           {"f", std::move(f)}};
  if (basis) {
    Json blocks = Json::array();
    for (const auto& [mu, m] : *basis)
      blocks.push_back(Json{{"mu", weight_to_json(mu)}, {"matrix", matrix_to_json(m)}});
    doc["basis"] = std::move(blocks);
  }
  return doc;
}

GradedBasis<Scalar> graded_basis_from_json(const Json& doc, const PreDualPerfectSpace<Scalar>& V) {
  require_object(doc, "basis document");
  const Json& bv = field(doc, "basis", "basis document");
  if (!bv.is_array()) throw ParseError("basis field 'basis' must be an array");
  GradedBasis<Scalar> B = identity_basis(V);
  for (const Json& entry : bv) {
    require_object(entry, "basis entry");
    Weight mu = weight_from_json(field(entry, "mu", "basis entry"), V.datum.lattice_rank(),
                                 "basis entry 'mu'");
    if (!V.dims.count(mu))
      throw ParseError("basis entry at " + mu.to_string() + " names an unknown weight");
    B[mu] = matrix_from_json(field(entry, "matrix", "basis entry"), "basis matrix");
  }
  return B;
}

Json graded_basis_to_json(const GradedBasis<Scalar>& B) {
  Json blocks = Json::array();
  for (const auto& [mu, m] : B)
    blocks.push_back(Json{{"mu", weight_to_json(mu)}, {"matrix", matrix_to_json(m)}});
  return Json{{"basis", std::move(blocks)}};
}

GradedBasis<Scalar> identity_basis(const PreDualPerfectSpace<Scalar>& V) {
  GradedBasis<Scalar> B;
  for (const auto& [mu, n] : V.dims) {
    MatQq id(n, n);
    id.setZero();
    for (int k = 0; k < n; ++k) id(k, k) = Scalar(1);
    B[mu] = std::move(id);
  }
  return B;
}

// ---- verifier and matcher outputs --------------------------------------------

Json certificate_to_json(const DualPerfectCertificate<Scalar>& c) {
  Json nodes = Json::array();
  for (int b = 0; b < c.size(); ++b) {
    Json coeff = Json::array();
    for (const Scalar& s : c.coeff[b]) coeff.push_back(scalar_to_json(s));
    nodes.push_back(Json{{"id", b},
                         {"wt", weight_to_json(c.wt[b])},
                         {"ell", c.ell[b]},
                         {"f", c.f_map[b]},
                         {"e", c.e_map[b]},
                         {"coeff", std::move(coeff)}});
  }
  return Json{{"nodes", std::move(nodes)}};
}

Json refutation_to_json(const DualPerfectRefutation& r) {
  return Json{{"node", r.node},
              {"index", r.index},
              {"wt", weight_to_json(r.wt)},
              {"reason", r.reason}};
}

Json outcome_to_json(const DualPerfectOutcome<Scalar>& out) {
  Json doc{{"accepted", out.accepted}};
  if (out.accepted)
    doc["certificate"] = certificate_to_json(out.certificate);
  else
    doc["refutation"] = refutation_to_json(out.refutation);
  return doc;
}

Json crystal_report_to_json(const CrystalReport& r) {
  return Json{{"passed", r.passed}, {"violations", r.violations}};
}

Json match_to_json(const MatchOutcome& m) {
  return Json{{"psi", m.psi},
              {"passed", m.verification.passed},
              {"violations", m.verification.violations}};
}

Json string_data_to_json(const GoodSequence& ib, const DualPerfectCertificate<Scalar>& cert) {
  Json data = Json::array();
  const std::vector<StringWalk> walks = all_string_data(ib, cert);
  for (int b = 0; b < cert.size(); ++b)
    data.push_back(Json{{"node", b},
                        {"wt", weight_to_json(cert.wt[b])},
                        {"datum", walks[static_cast<std::size_t>(b)].datum.values},
                        {"head", walks[static_cast<std::size_t>(b)].terminal}});
  return Json{{"sequence", Json{{"prefix", ib.prefix}, {"block", ib.block}}},
              {"heads", head_nodes(cert)},
              {"data", std::move(data)}};
}

Json expansion_report_to_json(const ExpansionReport& r, int index) {
  Json corrections = Json::array();
  for (const ExpansionTerm& t : r.corrections)
    corrections.push_back(
        Json{{"src", t.src}, {"dst", t.dst}, {"coeff", scalar_to_json(t.coeff)}});
  return Json{{"index", index},
              {"passed", r.passed},
              {"violations", r.violations},
              {"corrections", std::move(corrections)}};
}

Json transpose_duality_to_json(const TransposeDualityReport& r) {
  return Json{{"primal_accepted", r.primal_accepted},
              {"dual_accepted", r.dual_accepted},
              {"passed", r.report.passed},
              {"violations", r.report.violations}};
}

}  // namespace qgkm
