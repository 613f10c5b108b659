#include "qgkm/crystal.hpp"

#include <limits>
#include <queue>

namespace qgkm {

namespace {

Content shifted(const Content& beta, int i, std::int64_t by) {
  Content c = beta;
  c[static_cast<std::size_t>(i)] += by;
  return c;
}

std::string content_str(const Content& beta) {
  std::string msg = "(";
  for (std::size_t k = 0; k < beta.size(); ++k) msg += (k ? "," : "") + std::to_string(beta[k]);
  return msg + ")";
}

bool engaged_equal(const ExtInt& a, const ExtInt& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a.has_value() || *a == *b;
}

std::vector<Rational> trim_residue(const VecQ& r) {
  std::vector<Rational> out;
  Eigen::Index last = -1;
  for (Eigen::Index k = 0; k < r.size(); ++k)
    if (r[k] != 0) last = k;
  out.reserve(static_cast<std::size_t>(last + 1));
  for (Eigen::Index k = 0; k <= last; ++k) out.push_back(r[k]);
  return out;
}

}  // namespace

std::string ext_to_string(const ExtInt& a) {
  return a ? std::to_string(*a) : std::string("-inf");
}

ModelOps module_ops(const HWModule& V) {
  ModelOps M;
  M.datum = &V.datum();
  M.depth = V.depth();
  M.dim = [&V](const Content& b) { return V.dim(b); };
  M.weight = [&V](const Content& b) { return V.weight_of(b); };
  M.lower = [&V](int i, const Content& b) { return V.f_matrix(i, b); };
  M.raise = [&V](int i, const Content& b) { return V.e_matrix(i, b); };
  M.string_cap = [&V](int i, const Content& b) -> std::int64_t {
    const std::int64_t p = V.pairing(i, b);
    if (V.datum().real(i)) return p;
    // An imaginary lowering operator never truncates a string unless the
    // weight pairing vanishes, in which case it kills the whole space.
    return p > 0 ? std::numeric_limits<std::int64_t>::max() : 0;
  };
  M.words_at = [&V](const Content& b) -> const std::vector<Word>& { return V.words(b); };
  M.expand_word = [&V](const Content& b, const Word& w) { return V.expand_word(b, w); };
  return M;
}

ModelOps halfalg_ops(const HalfAlgebra& H) {
  ModelOps M;
  M.datum = &H.datum();
  M.depth = H.depth();
  M.dim = [&H](const Content& b) { return H.dim(b); };
  M.weight = [&H](const Content& b) { return H.weight_of(b); };
  M.lower = [&H](int i, const Content& b) { return H.f_matrix(i, b); };
  M.raise = [&H](int i, const Content& b) { return H.e_prime_matrix(i, b); };
  M.string_cap = [](int, const Content&) { return std::numeric_limits<std::int64_t>::max(); };
  M.words_at = [&H](const Content& b) -> const std::vector<Word>& { return H.words(b); };
  M.expand_word = [&H](const Content& b, const Word& w) { return H.expand_word(b, w); };
  return M;
}

MatQq divided_power_matrix(const ModelOps& M, int i, int k, const Content& from) {
  if (k < 0) throw InvalidDatum("divided power exponent must be nonnegative");
  const int d0 = M.dim(from);
  MatQq acc = MatQq::Identity(d0, d0);
  Content cur = from;
  for (int t = 0; t < k; ++t) {
    acc = MatQq(M.lower(i, cur) * acc);
    cur[static_cast<std::size_t>(i)] += 1;
  }
  if (M.datum->real(i) && k >= 2) acc = MatQq(acc * M.datum->quantum_factorial(i, k).inverse());
  return acc;
}

std::vector<StringPart> string_decompose(const ModelOps& M, int i, const Content& beta,
                                         const VecQq& v) {
  if (i < 0 || i >= M.datum->size()) throw InvalidDatum("index out of range");
  const int dm = M.dim(beta);
  if (v.size() != dm) throw InvalidDatum("vector length does not match the content dimension");
  std::vector<StringPart> parts;
  if (dm == 0 || is_zero_vec<Scalar>(v)) return parts;

  struct BlockInfo {
    int exponent;
    MatQq kernel;
    Eigen::Index offset;
  };
  std::vector<BlockInfo> blocks;
  std::vector<MatQq> pieces;
  Eigen::Index total = 0;
  for (std::int64_t k = 0; k <= beta[static_cast<std::size_t>(i)]; ++k) {
    const Content ck = shifted(beta, i, -k);
    if (k >= 1 && k > M.string_cap(i, ck)) continue;
    MatQq ker = kernel_basis<Scalar>(M.raise(i, ck));
    if (ker.cols() == 0) continue;
    pieces.push_back(MatQq(divided_power_matrix(M, i, static_cast<int>(k), ck) * ker));
    blocks.push_back({static_cast<int>(k), std::move(ker), total});
    total += blocks.back().kernel.cols();
  }
  LinearSolver<Scalar> solver(hstack<Scalar>(pieces, dm));
  if (!solver.full_column_rank())
    throw Error("string decomposition blocks at content " + content_str(beta) +
                " are not independent");
  auto x = solver.solve(v);
  if (!x)
    throw Error("string decomposition at content " + content_str(beta) +
                " does not span the vector");
  for (const auto& b : blocks) {
    VecQq comp = b.kernel * x->segment(b.offset, b.kernel.cols());
    if (!is_zero_vec<Scalar>(comp)) parts.push_back({b.exponent, std::move(comp)});
  }
  return parts;
}

std::optional<ModelVec> kashiwara_raise(const ModelOps& M, int i, const Content& beta,
                                        const VecQq& v) {
  const auto parts = string_decompose(M, i, beta, v);
  bool any = false;
  for (const auto& p : parts)
    if (p.exponent >= 1) any = true;
  if (!any) return std::nullopt;
  const Content target = shifted(beta, i, -1);
  VecQq out = VecQq::Zero(M.dim(target));
  for (const auto& p : parts) {
    if (p.exponent == 0) continue;
    const Content ck = shifted(beta, i, -p.exponent);
    out += divided_power_matrix(M, i, p.exponent - 1, ck) * p.component;
  }
  if (is_zero_vec<Scalar>(out)) return std::nullopt;
  return ModelVec{target, std::move(out)};
}

std::optional<ModelVec> kashiwara_lower(const ModelOps& M, int i, const Content& beta,
                                        const VecQq& v) {
  if (height(beta) + 1 > M.depth)
    throw TruncationEscape("Kashiwara lowering from content " + content_str(beta) +
                           " leaves the truncation");
  const auto parts = string_decompose(M, i, beta, v);
  const Content target = shifted(beta, i, 1);
  VecQq out = VecQq::Zero(M.dim(target));
  for (const auto& p : parts) {
    const Content ck = shifted(beta, i, -p.exponent);
    out += divided_power_matrix(M, i, p.exponent + 1, ck) * p.component;
  }
  if (out.size() == 0 || is_zero_vec<Scalar>(out)) return std::nullopt;
  return ModelVec{target, std::move(out)};
}

GeneratedCrystal generate_crystal(const ModelOps& M) {
  const CartanDatum& d = *M.datum;
  const int n = d.size();
  GeneratedCrystal out;
  AbstractCrystal& C = out.crystal;
  LatticeState& L = out.lattice;
  C.index_count = n;

  const Content origin(static_cast<std::size_t>(n), 0);
  if (M.dim(origin) != 1) throw InvalidDatum("seed space is not one-dimensional");

  // Phase 1: enumerate every word in the lowering Kashiwara operators applied
  // to the seed, breadth first, within the depth. No deduplication yet — node
  // identity only makes sense over the finished lattice.
  struct WordRec {
    Content content;
    VecQq vec;
    std::vector<int> child;  // per index; -1 = lowered to the zero vector
  };
  std::vector<WordRec> words;
  {
    VecQq seed(1);
    seed(0) = Scalar(1);
    words.push_back({origin, std::move(seed), std::vector<int>(static_cast<std::size_t>(n), -1)});
  }
  for (std::size_t at = 0; at < words.size(); ++at) {
    const Content beta = words[at].content;
    if (height(beta) + 1 > M.depth) continue;  // no words beyond the boundary
    for (int i = 0; i < n; ++i) {
      const auto low = kashiwara_lower(M, i, beta, words[at].vec);
      if (!low) continue;
      words[at].child[static_cast<std::size_t>(i)] = static_cast<int>(words.size());
      words.push_back(
          {low->content, low->coords, std::vector<int>(static_cast<std::size_t>(n), -1)});
    }
  }

  // Phase 2: per content, a basis of the module of regular-at-zero
  // combinations spanned by the words. A word whose expansion over the
  // current generators carries a pole of order m exposes a finer direction:
  // it swaps against a generator whose coefficient is a unit times q^-m.
  std::map<Content, MatQq> gens;
  for (const auto& w : words) {
    MatQq& G = gens.try_emplace(w.content, MatQq(w.vec.size(), 0)).first->second;
    if (G.cols() == 0) {
      G.conservativeResize(Eigen::NoChange, 1);
      G.col(0) = w.vec;
      continue;
    }
    LinearSolver<Scalar> solver(G);
    const auto x = solver.solve(w.vec);
    if (!x) {
      G.conservativeResize(Eigen::NoChange, G.cols() + 1);
      G.col(G.cols() - 1) = w.vec;
      continue;
    }
    std::int64_t pole = 0;
    for (Eigen::Index k = 0; k < x->size(); ++k)
      if (!(*x)[k].is_zero()) pole = std::max(pole, -(*x)[k].val0());
    if (pole == 0) continue;  // already a regular combination
    for (Eigen::Index k = 0; k < x->size(); ++k) {
      if (!(*x)[k].is_zero() && (*x)[k].val0() == -pole) {
        G.col(k) = w.vec;
        break;
      }
    }
  }

  // Phase 3: residues of every word over the finished lattice. A pole here is
  // a genuine failure of the lattice property.
  std::map<Content, LinearSolver<Scalar>> solvers;
  for (const auto& [beta, G] : gens) solvers.emplace(beta, LinearSolver<Scalar>(G));
  std::vector<std::vector<Rational>> word_residue(words.size());
  for (std::size_t at = 0; at < words.size(); ++at) {
    const auto x = solvers.at(words[at].content).solve(words[at].vec);
    if (!x) throw Error("generated word escapes its own lattice span");
    VecQ res(x->size());
    for (Eigen::Index k = 0; k < x->size(); ++k) {
      if (!(*x)[k].is_regular_at_zero())
        throw LatticeViolation("expansion coefficient of a generated vector has a pole at q=0");
      res[k] = (*x)[k].eval0();
    }
    word_residue[at] = trim_residue(res);
  }

  // Nodes: distinct nonzero residues in word order; each new residue must be
  // a new independent direction of the residue space.
  std::map<Content, std::map<std::vector<Rational>, int>> node_by_residue;
  std::map<Content, std::vector<std::vector<Rational>>> residues_seen;
  std::vector<int> word_node(words.size(), -1);
  for (std::size_t at = 0; at < words.size(); ++at) {
    const auto& residue = word_residue[at];
    if (residue.empty()) continue;  // the word lies in q times the lattice
    const Content& beta = words[at].content;
    auto& lookup = node_by_residue[beta];
    const auto hit = lookup.find(residue);
    if (hit != lookup.end()) {
      word_node[at] = hit->second;
      continue;
    }
    auto& seen = residues_seen[beta];
    std::size_t width = residue.size();
    for (const auto& r : seen) width = std::max(width, r.size());
    MatQ R = MatQ::Zero(static_cast<Eigen::Index>(width),
                        static_cast<Eigen::Index>(seen.size() + 1));
    for (std::size_t c = 0; c < seen.size(); ++c)
      for (std::size_t r = 0; r < seen[c].size(); ++r)
        R(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = seen[c][r];
    for (std::size_t r = 0; r < residue.size(); ++r)
      R(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(seen.size())) = residue[r];
    if (rank_of<Rational>(R) != static_cast<int>(seen.size()) + 1)
      throw LatticeViolation("generated residue mixes existing nodes at " + content_str(beta));
    const int id = static_cast<int>(L.node_content.size());
    L.node_content.push_back(beta);
    L.node_vector.push_back(words[at].vec);
    L.node_residue.push_back(residue);
    lookup.emplace(residue, id);
    seen.push_back(residue);
    word_node[at] = id;
  }

  // Phase 4: edges. Lowering must be constant on residue classes, vectors in
  // q times the lattice must stay there, and raising edges may not collide.
  const int count = static_cast<int>(L.node_content.size());
  C.f_to.assign(static_cast<std::size_t>(count), std::vector<int>(static_cast<std::size_t>(n), -1));
  C.e_to.assign(static_cast<std::size_t>(count), std::vector<int>(static_cast<std::size_t>(n), -1));
  std::map<std::pair<int, int>, int> vote;  // (node, index) -> observed target
  for (std::size_t at = 0; at < words.size(); ++at) {
    const int b = word_node[at];
    if (height(words[at].content) + 1 > M.depth) continue;
    for (int i = 0; i < n; ++i) {
      const int cw = words[at].child[static_cast<std::size_t>(i)];
      const int target = cw == -1 ? -1 : word_node[static_cast<std::size_t>(cw)];
      if (b == -1) {
        if (target != -1)
          throw LatticeViolation("a vector in q times the lattice lowered onto a node at " +
                                 content_str(words[at].content));
        continue;
      }
      const auto key = std::make_pair(b, i);
      const auto seen = vote.find(key);
      if (seen == vote.end())
        vote.emplace(key, target);
      else if (seen->second != target)
        throw LatticeViolation("lowering is not constant on the residue class of a node at " +
                               content_str(words[at].content));
    }
  }
  for (const auto& [key, target] : vote) {
    if (target == -1) continue;
    C.f_to[static_cast<std::size_t>(key.first)][static_cast<std::size_t>(key.second)] = target;
    int& back = C.e_to[static_cast<std::size_t>(target)][static_cast<std::size_t>(key.second)];
    if (back != -1 && back != key.first)
      throw LatticeViolation("two distinct nodes lower onto one node");
    back = key.first;
  }

  C.wt.resize(static_cast<std::size_t>(count), Weight::zero(d.lattice_rank()));
  C.eps.assign(static_cast<std::size_t>(count), std::vector<ExtInt>(static_cast<std::size_t>(n)));
  C.phi.assign(static_cast<std::size_t>(count), std::vector<ExtInt>(static_cast<std::size_t>(n)));
  for (int b = 0; b < count; ++b) {
    const Content& beta = L.node_content[static_cast<std::size_t>(b)];
    const Weight w = M.weight(beta);
    C.wt[static_cast<std::size_t>(b)] = w;
    for (int i = 0; i < n; ++i) {
      // String position of a real index: length of the raising walk through
      // the graph. The raw string decomposition of a representative vector
      // can overshoot it when trailing components lie in q times the lattice.
      std::int64_t eps = 0;
      if (d.real(i)) {
        int cur = b;
        while (C.e_to[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)] != -1) {
          cur = C.e_to[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)];
          ++eps;
        }
      }
      C.eps[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] = eps;
      C.phi[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] = eps + d.pair(i, w);
    }
  }

  L.generators = std::move(gens);
  return out;
}

std::vector<Rational> lattice_residue(const LatticeState& L, const Content& beta,
                                      const VecQq& w) {
  if (is_zero_vec<Scalar>(w)) return {};
  const auto it = L.generators.find(beta);
  if (it == L.generators.end() || it->second.cols() == 0)
    throw Error("no lattice generators recorded at content " + content_str(beta));
  LinearSolver<Scalar> solver(it->second);
  const auto x = solver.solve(w);
  if (!x) throw Error("vector lies outside the lattice span at content " + content_str(beta));
  VecQ res(x->size());
  for (Eigen::Index k = 0; k < x->size(); ++k) {
    if (!(*x)[k].is_regular_at_zero())
      throw LatticeViolation("expansion coefficient has a pole at q=0");
    res[k] = (*x)[k].eval0();
  }
  return trim_residue(res);
}

namespace {

// Shared shape validation: every per-node array must exist for every node and
// carry one entry per index, and edge targets must be node ids or -1.
bool crystal_shape_ok(const CartanDatum& d, const AbstractCrystal& C, CrystalReport* rep) {
  const int N = C.size();
  bool ok = true;
  auto fail = [&](std::string m) {
    rep->violations.push_back(std::move(m));
    ok = false;
  };
  if (C.index_count != d.size()) fail("index count does not match the datum");
  if (static_cast<int>(C.eps.size()) != N || static_cast<int>(C.phi.size()) != N ||
      static_cast<int>(C.e_to.size()) != N || static_cast<int>(C.f_to.size()) != N)
    fail("per-node arrays do not match the node count");
  else
    for (int b = 0; b < N; ++b) {
      const auto sb = static_cast<std::size_t>(b);
      if (C.wt[sb].size() != d.lattice_rank()) fail("weight has wrong coordinate length");
      if (static_cast<int>(C.eps[sb].size()) != d.size() ||
          static_cast<int>(C.phi[sb].size()) != d.size() ||
          static_cast<int>(C.e_to[sb].size()) != d.size() ||
          static_cast<int>(C.f_to[sb].size()) != d.size()) {
        fail("per-index arrays have wrong length at node " + std::to_string(b));
        continue;
      }
      for (int i = 0; i < d.size(); ++i) {
        const auto si = static_cast<std::size_t>(i);
        if (C.e_to[sb][si] < -1 || C.e_to[sb][si] >= N || C.f_to[sb][si] < -1 ||
            C.f_to[sb][si] >= N)
          fail("edge target out of range at node " + std::to_string(b));
      }
    }
  return ok;
}

}  // namespace

CrystalReport check_crystal_axioms(const CartanDatum& d, const AbstractCrystal& C) {
  CrystalReport rep;
  auto fail = [&](const std::string& m) { rep.violations.push_back(m); };
  if (!crystal_shape_ok(d, C, &rep)) {
    rep.passed = false;
    return rep;
  }
  const int N = C.size();
  for (int b = 0; b < N; ++b) {
    const auto sb = static_cast<std::size_t>(b);
    for (int i = 0; i < d.size(); ++i) {
      const auto si = static_cast<std::size_t>(i);
      const ExtInt eps = C.eps[sb][si], phi = C.phi[sb][si];
      const std::string at = " at node " + std::to_string(b) + ", index " + std::to_string(i);

      // (1) phi = eps + <h_i, wt>.
      if (!engaged_equal(phi, ext_add(eps, d.pair(i, C.wt[sb]))))
        fail("clause (1)" + at + ": phi = " + ext_to_string(phi) + " but eps + <h_i, wt> = " +
             ext_to_string(ext_add(eps, d.pair(i, C.wt[sb]))));

      const int up = C.e_to[sb][si];
      const int dn = C.f_to[sb][si];

      // (2) weights move by alpha_i along edges.
      if (up != -1 && C.wt[static_cast<std::size_t>(up)] != C.wt[sb] + d.simple_root(i))
        fail("clause (2)" + at + ": wt of the raised node is not wt + alpha_i");
      if (dn != -1 && C.wt[static_cast<std::size_t>(dn)] != C.wt[sb] - d.simple_root(i))
        fail("clause (2)" + at + ": wt of the lowered node is not wt - alpha_i");

      // (3) raising and lowering are mutually inverse partial maps.
      if (dn != -1 && C.e_to[static_cast<std::size_t>(dn)][si] != b)
        fail("clause (3)" + at + ": lowering edge has no matching raising edge");
      if (up != -1 && C.f_to[static_cast<std::size_t>(up)][si] != b)
        fail("clause (3)" + at + ": raising edge has no matching lowering edge");

      // (4) phi = -inf freezes the node for that index.
      if (!phi && (up != -1 || dn != -1))
        fail("clause (4)" + at + ": phi = -inf but an edge is present");

      // (5) bookkeeping along a raising edge.
      if (up != -1) {
        const auto su = static_cast<std::size_t>(up);
        const ExtInt eps_want = d.real(i) ? ext_add(eps, -1) : eps;
        const ExtInt phi_want = d.real(i) ? ext_add(phi, 1) : ext_add(phi, d.a(i, i));
        if (!engaged_equal(C.eps[su][si], eps_want))
          fail("clause (5)" + at + ": eps of the raised node is " + ext_to_string(C.eps[su][si]) +
               ", expected " + ext_to_string(eps_want));
        if (!engaged_equal(C.phi[su][si], phi_want))
          fail("clause (5)" + at + ": phi of the raised node is " + ext_to_string(C.phi[su][si]) +
               ", expected " + ext_to_string(phi_want));
      }

      // (6) bookkeeping along a lowering edge.
      if (dn != -1) {
        const auto sd = static_cast<std::size_t>(dn);
        const ExtInt eps_want = d.real(i) ? ext_add(eps, 1) : eps;
        const ExtInt phi_want = d.real(i) ? ext_add(phi, -1) : ext_add(phi, -d.a(i, i));
        if (!engaged_equal(C.eps[sd][si], eps_want))
          fail("clause (6)" + at + ": eps of the lowered node is " +
               ext_to_string(C.eps[sd][si]) + ", expected " + ext_to_string(eps_want));
        if (!engaged_equal(C.phi[sd][si], phi_want))
          fail("clause (6)" + at + ": phi of the lowered node is " +
               ext_to_string(C.phi[sd][si]) + ", expected " + ext_to_string(phi_want));
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

CrystalReport check_morphism(const CartanDatum& d, const AbstractCrystal& A,
                             const AbstractCrystal& B, const std::vector<int>& psi) {
  CrystalReport rep;
  auto fail = [&](const std::string& m) { rep.violations.push_back(m); };
  if (!crystal_shape_ok(d, A, &rep) || !crystal_shape_ok(d, B, &rep)) {
    rep.passed = false;
    return rep;
  }
  if (static_cast<int>(psi.size()) != A.size()) {
    rep.passed = false;
    rep.violations.push_back("map size does not match the source node count");
    return rep;
  }
  for (int b = 0; b < A.size(); ++b) {
    const int img = psi[static_cast<std::size_t>(b)];
    if (img < -1 || img >= B.size()) {
      fail("image of node " + std::to_string(b) + " is out of range");
      continue;
    }
    if (img == -1) continue;
    const auto sb = static_cast<std::size_t>(b), sm = static_cast<std::size_t>(img);
    // Clause (1): the map preserves wt, eps and phi wherever it is nonzero.
    if (A.wt[sb] != B.wt[sm])
      fail("clause (1) at node " + std::to_string(b) + ": wt changes under the map");
    for (int i = 0; i < d.size(); ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (!engaged_equal(A.eps[sb][si], B.eps[sm][si]))
        fail("clause (1) at node " + std::to_string(b) + ", index " + std::to_string(i) +
             ": eps changes under the map");
      if (!engaged_equal(A.phi[sb][si], B.phi[sm][si]))
        fail("clause (1) at node " + std::to_string(b) + ", index " + std::to_string(i) +
             ": phi changes under the map");
    }
  }
  // Clause (2): lowering edges between mapped nodes transport, with the
  // matching raising edge on the image side.
  for (int b = 0; b < A.size(); ++b) {
    const auto sb = static_cast<std::size_t>(b);
    const int img = psi[sb];
    if (img == -1) continue;
    for (int i = 0; i < d.size(); ++i) {
      const auto si = static_cast<std::size_t>(i);
      const int b2 = A.f_to[sb][si];
      if (b2 == -1) continue;
      const int img2 = psi[static_cast<std::size_t>(b2)];
      if (img2 == -1) continue;
      if (B.f_to[static_cast<std::size_t>(img)][si] != img2)
        fail("clause (2) at node " + std::to_string(b) + ", index " + std::to_string(i) +
             ": lowering edge is not transported");
      if (B.e_to[static_cast<std::size_t>(img2)][si] != img)
        fail("clause (2) at node " + std::to_string(b) + ", index " + std::to_string(i) +
             ": raising edge is not transported");
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

CrystalReport check_isomorphism(const CartanDatum& d, const AbstractCrystal& A,
                                const AbstractCrystal& B, const std::vector<int>& psi) {
  CrystalReport rep = check_morphism(d, A, B, psi);
  if (!rep.passed) return rep;
  auto fail = [&](const std::string& m) { rep.violations.push_back(m); };
  if (A.size() != B.size()) fail("node counts differ");
  std::vector<int> inverse(static_cast<std::size_t>(B.size()), -1);
  for (int b = 0; b < A.size(); ++b) {
    const int img = psi[static_cast<std::size_t>(b)];
    if (img == -1) {
      fail("map sends node " + std::to_string(b) + " to zero");
      continue;
    }
    if (inverse[static_cast<std::size_t>(img)] != -1)
      fail("map is not injective at node " + std::to_string(img));
    inverse[static_cast<std::size_t>(img)] = b;
  }
  for (int b = 0; b < B.size(); ++b)
    if (inverse[static_cast<std::size_t>(b)] == -1)
      fail("map misses node " + std::to_string(b));
  if (rep.violations.empty()) {
    CrystalReport back = check_morphism(d, B, A, inverse);
    for (const auto& v : back.violations) fail("inverse: " + v);
  }
  rep.passed = rep.violations.empty();
  return rep;
}

}  // namespace qgkm
