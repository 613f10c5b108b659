#include "qgkm/global.hpp"

#include <cstddef>
#include <utility>

#include "qgkm/errors.hpp"

namespace qgkm {

namespace {

std::string content_str(const Content& beta) {
  std::string s = "(";
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(beta[k]);
  }
  return s + ")";
}

Content shifted(const Content& beta, int i, std::int64_t delta) {
  Content c = beta;
  c[static_cast<std::size_t>(i)] += delta;
  return c;
}

// Least common multiple of the denominators of every entry.
Scalar common_denominator(const std::vector<const MatQq*>& mats) {
  LaurentPoly lcm(Rational(1));
  for (const MatQq* m : mats) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      for (Eigen::Index c = 0; c < m->cols(); ++c) {
        const Scalar& s = (*m)(r, c);
        if (s.is_zero() || s.den().is_one()) continue;
        const LaurentPoly g = LaurentPoly::gcd(lcm, s.den());
        lcm *= LaurentPoly::div_exact(s.den(), g);
      }
    }
  }
  return Scalar(lcm);
}

// Pivot position of a residue that is a unit vector, or -1.
int unit_pivot(const std::vector<Rational>& residue) {
  int pivot = -1;
  for (std::size_t k = 0; k < residue.size(); ++k) {
    if (residue[k] == Rational(0)) continue;
    if (pivot != -1 || residue[k] != Rational(1)) return -1;
    pivot = static_cast<int>(k);
  }
  return pivot;
}

}  // namespace

bool IntegralSpan::member(const VecQq& v) const {
  VecQq w = VecQq(v * scale);
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (!w[k].is_zero() && !w[k].is_laurent()) return false;
  return laurent::contains(basis, w);
}

VecQq divided_monomial(const ModelOps& M, const Content& beta, const Word& w) {
  VecQq v = M.expand_word(beta, w);
  Scalar norm(1);
  std::size_t t = 0;
  while (t < w.size()) {
    const std::size_t s = t;
    while (t < w.size() && w[t] == w[s]) ++t;
    const int i = w[s];
    if (M.datum->real(i)) norm *= M.datum->quantum_factorial(i, static_cast<int>(t - s));
  }
  return VecQq(v * norm.inverse());
}

IntegralSpan integral_basis(const ModelOps& M, const Content& beta) {
  const auto& ws = M.words_at(beta);
  MatQq cols(M.dim(beta), static_cast<Eigen::Index>(ws.size()));
  for (std::size_t j = 0; j < ws.size(); ++j)
    cols.col(static_cast<Eigen::Index>(j)) = divided_monomial(M, beta, ws[j]);
  IntegralSpan out;
  out.scale = common_denominator({&cols});
  out.basis = laurent::column_basis(MatQq(cols * out.scale));
  return out;
}

GlobalBasis solve_global_basis(const ModelOps& M, const GeneratedCrystal& G) {
  const CartanDatum& d = *M.datum;
  const AbstractCrystal& C = G.crystal;
  const LatticeState& L = G.lattice;
  const int count = static_cast<int>(L.node_content.size());
  GlobalBasis out;
  out.vectors.resize(static_cast<std::size_t>(count));

  // Contents in order of their first node; node ids are produced by
  // increasing height, so every content is reached only after the contents
  // its candidates are lowered from.
  std::vector<Content> order;
  std::map<Content, std::vector<int>> at;
  for (int b = 0; b < count; ++b) {
    const Content& beta = L.node_content[static_cast<std::size_t>(b)];
    auto [it, fresh] = at.try_emplace(beta);
    if (fresh) order.push_back(beta);
    it->second.push_back(b);
  }

  for (const Content& beta : order) {
    const auto& nodes = at.at(beta);
    if (height(beta) == 0) {
      out.vectors[static_cast<std::size_t>(nodes.front())] =
          L.node_vector[static_cast<std::size_t>(nodes.front())];
      continue;
    }
    const MatQq& gens = L.generators.at(beta);
    const Eigen::Index m = gens.cols();
    if (static_cast<Eigen::Index>(nodes.size()) != m)
      throw NoConvergence("crystal nodes do not fill the lattice at " + content_str(beta));

    // Candidate per node: a divided lowering power of the solved vector at
    // the top of its string (one plain lowering step for an imaginary index).
    MatQq U(M.dim(beta), m);
    for (std::size_t t = 0; t < nodes.size(); ++t) {
      const int b = nodes[t];
      int pick = -1;
      for (int i = 0; i < d.size(); ++i) {
        if (C.e_to[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] != -1) {
          pick = i;
          break;
        }
      }
      if (pick == -1)
        throw NoConvergence("node without a raising edge at " + content_str(beta));
      if (d.real(pick)) {
        const ExtInt eps = C.eps[static_cast<std::size_t>(b)][static_cast<std::size_t>(pick)];
        if (!eps || *eps <= 0)
          throw NoConvergence("raising edge with zero string position at " + content_str(beta));
        int b0 = b;
        for (std::int64_t s = 0; s < *eps; ++s) {
          b0 = C.e_to[static_cast<std::size_t>(b0)][static_cast<std::size_t>(pick)];
          if (b0 == -1)
            throw NoConvergence("string position exceeds the raising walk at " +
                                content_str(beta));
        }
        const Content& from = L.node_content[static_cast<std::size_t>(b0)];
        U.col(static_cast<Eigen::Index>(t)) =
            divided_power_matrix(M, pick, static_cast<int>(*eps), from) *
            out.vectors[static_cast<std::size_t>(b0)];
      } else {
        const int b0 = C.e_to[static_cast<std::size_t>(b)][static_cast<std::size_t>(pick)];
        const Content& from = L.node_content[static_cast<std::size_t>(b0)];
        U.col(static_cast<Eigen::Index>(t)) =
            M.lower(pick, from) * out.vectors[static_cast<std::size_t>(b0)];
      }
    }

    // Residues of the candidates over the lattice generators.
    LinearSolver<Scalar> solver(gens);
    MatQ T(m, m);
    for (Eigen::Index t = 0; t < m; ++t) {
      const auto x = solver.solve(U.col(t));
      if (!x) throw NoConvergence("candidate escapes the weight space at " + content_str(beta));
      for (Eigen::Index k = 0; k < m; ++k) {
        if (!(*x)[k].is_regular_at_zero())
          throw NoConvergence("candidate escapes the crystal lattice at " + content_str(beta));
        T(k, t) = (*x)[k].eval0();
      }
    }

    // Rational elimination: combine the candidates so each node's vector has
    // residue exactly that node. Combinations with rational coefficients stay
    // bar-fixed and inside both the lattice and the integral form, so the
    // result is the unique vector with all three properties.
    LinearSolver<Rational> tsolver(T);
    for (std::size_t t = 0; t < nodes.size(); ++t) {
      const int b = nodes[t];
      const int pivot = unit_pivot(L.node_residue[static_cast<std::size_t>(b)]);
      if (pivot == -1)
        throw NoConvergence("node residue is not a lattice generator at " + content_str(beta));
      VecQ target = VecQ::Zero(m);
      target[pivot] = Rational(1);
      const auto y = tsolver.solve(target);
      if (!y)
        throw NoConvergence("candidates do not separate the nodes at " + content_str(beta));
      VecQq g = VecQq::Zero(U.rows());
      for (Eigen::Index s = 0; s < m; ++s) {
        if ((*y)[s] == Rational(0)) continue;
        g += U.col(s) * Scalar((*y)[s]);
      }
      out.vectors[static_cast<std::size_t>(b)] = std::move(g);
    }
  }

  for (const auto& [beta, gens] : L.generators) out.integral.emplace(beta, integral_basis(M, beta));
  return out;
}

GlobalReport check_global_invariants(const ModelOps& M, const GeneratedCrystal& G,
                                     const GlobalBasis& GB) {
  const AbstractCrystal& C = G.crystal;
  const LatticeState& L = G.lattice;
  GlobalReport rep;
  auto fail = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

  std::map<Content, std::vector<int>> at;
  for (int b = 0; b < C.size(); ++b)
    at[L.node_content[static_cast<std::size_t>(b)]].push_back(b);

  std::map<Content, LinearSolver<Scalar>> solvers;
  for (const auto& [beta, gens] : L.generators) solvers.emplace(beta, LinearSolver<Scalar>(gens));

  for (int b = 0; b < C.size(); ++b) {
    const auto sb = static_cast<std::size_t>(b);
    const Content& beta = L.node_content[sb];
    const VecQq& g = GB.vectors[sb];
    const std::string tag = "node " + std::to_string(b) + " at " + content_str(beta);
    if (bar(g) != g) fail("vector is not fixed by the bar involution: " + tag);
    if (!GB.integral.at(beta).member(g)) fail("vector lies outside the integral form: " + tag);

    const auto x = solvers.at(beta).solve(g);
    if (!x) {
      fail("vector escapes its weight space: " + tag);
      continue;
    }
    bool regular = true;
    for (Eigen::Index k = 0; k < x->size(); ++k)
      if (!(*x)[k].is_regular_at_zero()) regular = false;
    if (!regular) {
      fail("vector lies outside the crystal lattice: " + tag);
      continue;
    }
    const auto& residue = L.node_residue[sb];
    for (Eigen::Index k = 0; k < x->size(); ++k) {
      const Rational want =
          static_cast<std::size_t>(k) < residue.size() ? residue[static_cast<std::size_t>(k)]
                                                       : Rational(0);
      if ((*x)[k].eval0() != want) {
        fail("vector is not congruent to its node modulo q times the lattice: " + tag);
        break;
      }
    }
    // Transition from the lattice generators: the node's unit vector plus
    // polynomial corrections divisible by q.
    for (Eigen::Index k = 0; k < x->size(); ++k) {
      const Rational want =
          static_cast<std::size_t>(k) < residue.size() ? residue[static_cast<std::size_t>(k)]
                                                       : Rational(0);
      const Scalar diff = (*x)[k] - Scalar(want);
      if (diff.is_zero()) continue;
      if (!diff.is_laurent() || diff.num().lo() < 1) {
        fail("transition from the lattice generators has a non-polynomial correction: " + tag);
        break;
      }
    }
  }

  // Basis property per content.
  for (const auto& [beta, nodes] : at) {
    MatQq cols(M.dim(beta), static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t t = 0; t < nodes.size(); ++t)
      cols.col(static_cast<Eigen::Index>(t)) = GB.vectors[static_cast<std::size_t>(nodes[t])];
    if (rank_of<Scalar>(cols) != M.dim(beta))
      fail("vectors do not form a basis of the weight space at " + content_str(beta));
  }

  rep.passed = rep.violations.empty();
  return rep;
}

ExpansionReport check_expansion(const ModelOps& M, const GeneratedCrystal& G,
                                const GlobalBasis& GB, int i) {
  const CartanDatum& d = *M.datum;
  const AbstractCrystal& C = G.crystal;
  const LatticeState& L = G.lattice;
  ExpansionReport rep;
  auto fail = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

  std::map<Content, std::vector<int>> at;
  for (int b = 0; b < C.size(); ++b)
    at[L.node_content[static_cast<std::size_t>(b)]].push_back(b);

  for (int b = 0; b < C.size(); ++b) {
    const auto sb = static_cast<std::size_t>(b);
    const Content& beta = L.node_content[sb];
    if (height(beta) + 1 > M.depth) continue;  // lowering leaves the truncation
    const Content gamma = shifted(beta, i, 1);
    const int target = C.f_to[sb][static_cast<std::size_t>(i)];
    const std::string tag = "node " + std::to_string(b) + ", index " + std::to_string(i);
    const VecQq fg = VecQq(M.lower(i, beta) * GB.vectors[sb]);
    if (M.dim(gamma) == 0) {
      if (target != -1) fail("edge points into an empty weight space: " + tag);
      continue;
    }
    const auto hit = at.find(gamma);
    if (hit == at.end()) {
      fail("lowered vector lands at a content without nodes: " + tag);
      continue;
    }
    const auto& below = hit->second;
    MatQq cols(M.dim(gamma), static_cast<Eigen::Index>(below.size()));
    for (std::size_t t = 0; t < below.size(); ++t)
      cols.col(static_cast<Eigen::Index>(t)) = GB.vectors[static_cast<std::size_t>(below[t])];
    const auto x = LinearSolver<Scalar>(cols).solve(fg);
    if (!x) {
      fail("lowered vector expands outside the basis: " + tag);
      continue;
    }

    if (d.real(i)) {
      const ExtInt eps = C.eps[sb][static_cast<std::size_t>(i)];
      if (!eps) {
        fail("real index carries no string position: " + tag);
        continue;
      }
      const Scalar lead = d.quantum_integer(i, 1 + *eps);
      for (std::size_t t = 0; t < below.size(); ++t) {
        const Scalar& c = (*x)[static_cast<Eigen::Index>(t)];
        if (below[t] == target) {
          if (c != lead)
            fail("leading coefficient at the edge target is not the expected quantum integer: " +
                 tag);
          continue;
        }
        if (c.is_zero()) continue;
        const ExtInt eps2 =
            C.eps[static_cast<std::size_t>(below[t])][static_cast<std::size_t>(i)];
        if (!eps2 || *eps2 <= 1 + *eps)
          fail("correction term lands on a node without a larger string position: " + tag +
               " -> node " + std::to_string(below[t]));
        if (!c.is_laurent())
          fail("correction coefficient is not a Laurent polynomial: " + tag + " -> node " +
               std::to_string(below[t]));
        rep.corrections.push_back({b, below[t], c});
      }
    } else {
      for (std::size_t t = 0; t < below.size(); ++t) {
        const Scalar& c = (*x)[static_cast<Eigen::Index>(t)];
        const Scalar want = below[t] == target ? Scalar(1) : Scalar(0);
        if (c != want) {
          fail("imaginary lowering must reproduce exactly the edge target: " + tag);
          break;
        }
      }
    }
  }

  rep.passed = rep.violations.empty();
  return rep;
}

GlobalReport check_filtration(const ModelOps& M, const GeneratedCrystal& G, const GlobalBasis& GB,
                              int i, std::int64_t n) {
  const AbstractCrystal& C = G.crystal;
  const LatticeState& L = G.lattice;
  GlobalReport rep;
  auto fail = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };
  if (n < 0) throw InvalidDatum("filtration level must be nonnegative");

  std::map<Content, std::vector<int>> at;
  for (int b = 0; b < C.size(); ++b)
    at[L.node_content[static_cast<std::size_t>(b)]].push_back(b);

  // Nodes are selected by the length of their raising walk in color i. For a
  // real index this equals the recorded string position; for an imaginary
  // index the recorded value is the constant 0 while the filtration counts
  // actual raising steps.
  auto walk_length = [&C, i](int b) {
    std::int64_t len = 0;
    int cur = b;
    while (C.e_to[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)] != -1) {
      cur = C.e_to[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)];
      ++len;
    }
    return len;
  };

  for (const auto& [beta, nodes] : at) {
    std::vector<int> chosen;
    for (int b : nodes)
      if (walk_length(b) >= n) chosen.push_back(b);
    MatQq gside(M.dim(beta), static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t t = 0; t < chosen.size(); ++t)
      gside.col(static_cast<Eigen::Index>(t)) = GB.vectors[static_cast<std::size_t>(chosen[t])];

    // Lowering side: images of the integral form under all k-fold divided
    // lowerings with k >= n.
    std::vector<VecQq> raw;
    const std::int64_t avail = beta[static_cast<std::size_t>(i)];
    for (std::int64_t k = n; k <= avail; ++k) {
      const Content from = shifted(beta, i, -k);
      if (M.dim(from) == 0) continue;
      const MatQq dp = divided_power_matrix(M, i, static_cast<int>(k), from);
      for (const Word& w : M.words_at(from))
        raw.push_back(VecQq(dp * divided_monomial(M, from, w)));
    }
    MatQq fside(M.dim(beta), static_cast<Eigen::Index>(raw.size()));
    for (std::size_t t = 0; t < raw.size(); ++t) fside.col(static_cast<Eigen::Index>(t)) = raw[t];

    const Scalar scale = common_denominator({&gside, &fside});
    const MatQq gs = MatQq(gside * scale);
    const MatQq fs = MatQq(fside * scale);
    const laurent::HermiteBasis hg = laurent::column_basis(gs);
    const laurent::HermiteBasis hf = laurent::column_basis(fs);
    bool ok = true;
    for (Eigen::Index c = 0; c < fs.cols() && ok; ++c)
      if (!laurent::contains(hg, fs.col(c))) ok = false;
    for (Eigen::Index c = 0; c < gs.cols() && ok; ++c)
      if (!laurent::contains(hf, gs.col(c))) ok = false;
    if (!ok)
      fail("level-" + std::to_string(n) + " spans differ at " + content_str(beta) + " for index " +
           std::to_string(i));
  }

  rep.passed = rep.violations.empty();
  return rep;
}

}  // namespace qgkm
