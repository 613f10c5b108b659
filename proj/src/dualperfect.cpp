#include "qgkm/dualperfect.hpp"

#include <algorithm>
#include <cstddef>
#include <tuple>
#include <utility>

#include "qgkm/errors.hpp"

namespace qgkm {

namespace {

std::string node_tag(int node, const Weight& mu) {
  return "node " + std::to_string(node) + " at " + mu.to_string();
}

// Images of the powers of one lowering operator inside one weight space:
// levels[n] spans f_i^n V restricted to the weight (level 0 is the whole
// space), descending to the zero space, which is always the last level.
template <typename K>
struct Filtration {
  std::vector<Mat<K>> levels;
  std::vector<LinearSolver<K>> solvers;

  int top() const { return static_cast<int>(levels.size()) - 1; }
  const Mat<K>& level(std::int64_t n) const {
    return levels[static_cast<std::size_t>(std::min<std::int64_t>(n, top()))];
  }
  // Rank of the level subspace (the level matrices span it but their columns
  // need not be independent).
  int rank_at(std::int64_t n) const {
    return solvers[static_cast<std::size_t>(std::min<std::int64_t>(n, top()))].rank();
  }
  bool member(std::int64_t n, const Vec<K>& v) const {
    return solvers[static_cast<std::size_t>(std::min<std::int64_t>(n, top()))].contains(v);
  }
  std::int64_t level_of(const Vec<K>& v) const {  // v must be nonzero
    std::int64_t n = 0;
    while (n < top() && solvers[static_cast<std::size_t>(n + 1)].contains(v)) ++n;
    return n;
  }
};

template <typename K>
Filtration<K> build_filtration(const PreDualPerfectSpace<K>& V, int i, const Weight& mu) {
  Filtration<K> F;
  const int d0 = V.dim(mu);
  Mat<K> comp(d0, d0);
  comp.setZero();
  for (int k = 0; k < d0; ++k) comp(k, k) = K(1);
  const Weight alpha = V.datum.simple_root(i);
  Weight up = mu;
  while (true) {
    F.levels.push_back(comp);
    F.solvers.emplace_back(comp);
    if (F.solvers.back().rank() == 0) break;
    up = up + alpha;
    if (V.dim(up) == 0) {
      Mat<K> zero(d0, 0);
      F.levels.push_back(zero);
      F.solvers.emplace_back(zero);
      break;
    }
    comp = Mat<K>(comp * V.f(i, up));
  }
  return F;
}

// Shared cache so each (index, weight) filtration is computed once.
template <typename K>
class FiltrationCache {
 public:
  explicit FiltrationCache(const PreDualPerfectSpace<K>& V) : V_(V) {}
  Filtration<K>& get(int i, const Weight& mu) {
    auto it = store_.find({i, mu});
    if (it == store_.end()) it = store_.emplace(std::pair{i, mu}, build_filtration(V_, i, mu)).first;
    return it->second;
  }

 private:
  const PreDualPerfectSpace<K>& V_;
  std::map<std::pair<int, Weight>, Filtration<K>> store_;
};

}  // namespace

template <typename K>
int PreDualPerfectSpace<K>::dim(const Weight& mu) const {
  auto it = dims.find(mu);
  return it == dims.end() ? 0 : it->second;
}

template <typename K>
Mat<K> PreDualPerfectSpace<K>::f(int i, const Weight& mu) const {
  auto it = maps.find({i, mu});
  if (it != maps.end()) return it->second;
  Mat<K> zero(dim(mu - datum.simple_root(i)), dim(mu));
  zero.setZero();
  return zero;
}

template <typename K>
PreDualPerfectSpace<K> PreDualPerfectSpace<K>::make(
    CartanDatum d, std::vector<Weight> tops, std::map<Weight, int> dims,
    std::map<std::pair<int, Weight>, Mat<K>> maps) {
  if (tops.empty()) throw InvalidDatum("a graded space needs at least one top weight");
  for (const auto& [mu, n] : dims) {
    if (n <= 0)
      throw InvalidDatum("weight space with nonpositive dimension at " + mu.to_string());
    bool below = false;
    for (const Weight& t : tops) {
      if (d.in_positive_root_lattice(t - mu)) {
        below = true;
        break;
      }
    }
    if (!below)
      throw InvalidDatum("weight " + mu.to_string() + " is not below any top weight");
  }
  auto dim_at = [&dims](const Weight& mu) {
    auto it = dims.find(mu);
    return it == dims.end() ? 0 : it->second;
  };
  for (const auto& [key, m] : maps) {
    const auto& [i, mu] = key;
    if (i < 0 || i >= d.size())
      throw InvalidDatum("lowering map with an index out of range");
    const Eigen::Index from = dim_at(mu);
    const Eigen::Index to = dim_at(mu - d.simple_root(i));
    if (m.cols() != from || m.rows() != to)
      throw InvalidDatum("lowering map at " + mu.to_string() + " has the wrong shape");
  }
  return PreDualPerfectSpace<K>{std::move(d), std::move(tops), std::move(dims), std::move(maps)};
}

template <typename K>
std::int64_t ell(const PreDualPerfectSpace<K>& V, int i, const Weight& mu, const Vec<K>& v) {
  if (v.size() != V.dim(mu))
    throw InvalidDatum("vector size does not match the weight space at " + mu.to_string());
  if (is_zero_vec(v)) throw ZeroVector("filtration level of the zero vector");
  return build_filtration(V, i, mu).level_of(v);
}

template <typename K>
DualPerfectOutcome<K> verify_dual_perfect(const PreDualPerfectSpace<K>& V,
                                          const GradedBasis<K>& B) {
  DualPerfectOutcome<K> out;
  DualPerfectCertificate<K>& cert = out.certificate;
  const int r = V.datum.size();

  // Graded-basis precondition: one full-rank square block per nonzero weight.
  for (const auto& [mu, n] : V.dims) {
    auto it = B.find(mu);
    if (it == B.end() || it->second.rows() != n || it->second.cols() != n)
      throw NotABasis("candidate block at " + mu.to_string() + " does not match the weight space");
    if (rank_of<K>(it->second) != n)
      throw NotABasis("candidate block at " + mu.to_string() + " is rank deficient");
  }
  for (const auto& [mu, m] : B) {
    if (V.dim(mu) == 0 && m.cols() > 0)
      throw NotABasis("candidate block at " + mu.to_string() + " sits at a zero weight space");
  }

  // Canonical node order: weights ascending, then columns.
  for (const auto& [mu, block] : B) {
    if (block.cols() == 0) continue;
    auto& ids = cert.at[mu];
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      ids.push_back(cert.size());
      cert.wt.push_back(mu);
      cert.col.push_back(static_cast<int>(c));
    }
  }
  const int count = cert.size();
  cert.ell.assign(static_cast<std::size_t>(count), std::vector<std::int64_t>(r, 0));
  cert.f_map.assign(static_cast<std::size_t>(count), std::vector<int>(r, -1));
  cert.e_map.assign(static_cast<std::size_t>(count), std::vector<int>(r, -1));
  cert.coeff.assign(static_cast<std::size_t>(count), std::vector<K>(static_cast<std::size_t>(r), K(0)));

  FiltrationCache<K> filt(V);
  for (const auto& [mu, ids] : cert.at) {
    const Mat<K>& block = B.at(mu);
    for (int i = 0; i < r; ++i) {
      Filtration<K>& F = filt.get(i, mu);
      for (std::size_t t = 0; t < ids.size(); ++t)
        cert.ell[static_cast<std::size_t>(ids[t])][static_cast<std::size_t>(i)] =
            F.level_of(block.col(static_cast<Eigen::Index>(t)));
    }
  }

  auto refute = [&out, &cert](int node, int i, std::string reason) {
    out.accepted = false;
    out.refutation = {node, i, cert.wt[static_cast<std::size_t>(node)], std::move(reason)};
  };

  // Expansion of each image over the next level's elements, two levels deep.
  // Cached per (index, target weight, level): the level-(n+1) elements there
  // and a solver for them joined with the level-(n+2) subspace.
  std::map<std::tuple<int, Weight, std::int64_t>, std::pair<std::vector<int>, LinearSolver<K>>>
      expanders;
  for (int i = 0; i < r; ++i) {
    for (const auto& [mu, ids] : cert.at) {
      const Mat<K>& block = B.at(mu);
      const Weight gamma = mu - V.datum.simple_root(i);
      const Mat<K> lower = V.f(i, mu);
      for (int b : ids) {
        const Vec<K> x = Vec<K>(lower * block.col(cert.col[static_cast<std::size_t>(b)]));
        if (is_zero_vec(x)) continue;  // companion image must and does stay 0
        const std::int64_t n = cert.ell[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];

        auto key = std::tuple{i, gamma, n};
        auto hit = expanders.find(key);
        if (hit == expanders.end()) {
          std::vector<int> family;
          auto git = cert.at.find(gamma);
          if (git != cert.at.end()) {
            for (int id : git->second)
              if (cert.ell[static_cast<std::size_t>(id)][static_cast<std::size_t>(i)] == n + 1)
                family.push_back(id);
          }
          Filtration<K>& FG = filt.get(i, gamma);
          const Mat<K>& deep = FG.level(n + 2);
          Mat<K> A(V.dim(gamma), static_cast<Eigen::Index>(family.size()) + deep.cols());
          const Mat<K>& gblock = B.at(gamma);
          for (std::size_t t = 0; t < family.size(); ++t)
            A.col(static_cast<Eigen::Index>(t)) =
                gblock.col(cert.col[static_cast<std::size_t>(family[t])]);
          if (deep.cols() > 0) A.rightCols(deep.cols()) = deep;
          LinearSolver<K> solver(A);
          if (solver.rank() != static_cast<int>(family.size()) + FG.rank_at(n + 2)) {
            refute(family.empty() ? b : family.front(), i,
                   "elements of one filtration level are dependent modulo the next level at " +
                       gamma.to_string());
            return out;
          }
          hit = expanders.emplace(key, std::pair{std::move(family), std::move(solver)}).first;
        }
        const auto& [family, solver] = hit->second;

        // Family columns are leftmost and independent modulo the deep block,
        // so they are pivot columns and their coordinates in the particular
        // solution are the unique ones.
        const auto sol = solver.solve(x);
        if (!sol) {
          refute(b, i, "image leaves the span of the next filtration level");
          return out;
        }
        int touched = -1;
        for (std::size_t t = 0; t < family.size(); ++t) {
          const K& c = (*sol)[static_cast<Eigen::Index>(t)];
          if (FieldOps<K>::is_zero(c)) continue;
          if (touched != -1) {
            refute(b, i,
                   "image touches more than one basis element modulo two filtration steps");
            return out;
          }
          touched = static_cast<int>(t);
        }
        if (touched != -1) {
          cert.f_map[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] = family[static_cast<std::size_t>(touched)];
          cert.coeff[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] =
              (*sol)[static_cast<Eigen::Index>(touched)];
        }
      }
    }

    // Injectivity of the companion map on nonzero images.
    std::map<int, int> seen;
    for (int b = 0; b < count; ++b) {
      const int t = cert.f_map[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
      if (t == -1) continue;
      auto [it, fresh] = seen.try_emplace(t, b);
      if (!fresh) {
        refute(b, i, "two basis elements share one companion image: also " +
                         node_tag(it->second, cert.wt[static_cast<std::size_t>(it->second)]));
        return out;
      }
      cert.e_map[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = b;
    }
  }

  out.accepted = true;
  return out;
}

template <typename K>
AbstractCrystal extract_graph(const CartanDatum& d, const DualPerfectCertificate<K>& cert) {
  AbstractCrystal C;
  C.index_count = d.size();
  C.wt = cert.wt;
  const int count = cert.size();
  const auto r = static_cast<std::size_t>(d.size());
  C.eps.assign(static_cast<std::size_t>(count), std::vector<ExtInt>(r));
  C.phi.assign(static_cast<std::size_t>(count), std::vector<ExtInt>(r));
  C.e_to = cert.e_map;
  C.f_to = cert.f_map;
  for (int b = 0; b < count; ++b) {
    const auto sb = static_cast<std::size_t>(b);
    for (int i = 0; i < d.size(); ++i) {
      const auto si = static_cast<std::size_t>(i);
      const std::int64_t eps = d.real(i) ? cert.ell[sb][si] : 0;
      C.eps[sb][si] = eps;
      C.phi[sb][si] = eps + d.pair(i, cert.wt[sb]);
    }
  }
  return C;
}

template <typename K>
CrystalReport companion_power_suite(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                    const DualPerfectCertificate<K>& cert,
                                    std::int64_t max_power) {
  CrystalReport rep;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.violations.push_back(std::move(msg));
  };
  if (max_power < 1) throw InvalidDatum("power bound must be positive");
  const int r = V.datum.size();
  const int count = cert.size();
  FiltrationCache<K> filt(V);

  auto column = [&B, &cert](int node) -> Vec<K> {
    return B.at(cert.wt[static_cast<std::size_t>(node)])
        .col(cert.col[static_cast<std::size_t>(node)]);
  };
  auto companion_power = [&cert](int node, int i, std::int64_t n) {
    int cur = node;
    for (std::int64_t k = 0; k < n && cur != -1; ++k)
      cur = cert.f_map[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)];
    return cur;
  };
  auto raise_walk = [&cert](int node, int i) {
    std::int64_t len = 0;
    int cur = node;
    while (cert.e_map[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)] != -1) {
      cur = cert.e_map[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)];
      ++len;
    }
    return len;
  };

  for (int i = 0; i < r; ++i) {
    const auto si = static_cast<std::size_t>(i);
    for (int b = 0; b < count; ++b) {
      const auto sb = static_cast<std::size_t>(b);
      const std::string tag = node_tag(b, cert.wt[sb]) + ", index " + std::to_string(i);
      // The level increases by exactly one along the companion map.
      const int t = cert.f_map[sb][si];
      if (t != -1 &&
          cert.ell[static_cast<std::size_t>(t)][si] != cert.ell[sb][si] + 1)
        fail("companion image does not raise the filtration level by one: " + tag);
      // The level counts companion preimages.
      if (raise_walk(b, i) != cert.ell[sb][si])
        fail("filtration level differs from the companion preimage count: " + tag);
    }

    // Sampled powers of the operator against powers of the companion map.
    for (int b = 0; b < count; ++b) {
      const auto sb = static_cast<std::size_t>(b);
      const std::int64_t base = cert.ell[sb][si];
      Vec<K> x = column(b);
      Weight mu = cert.wt[sb];
      for (std::int64_t n = 1; n <= max_power; ++n) {
        x = Vec<K>(V.f(i, mu) * x);
        mu = mu - V.datum.simple_root(i);
        const int target = companion_power(b, i, n);
        const std::string tag = node_tag(b, cert.wt[sb]) + ", index " + std::to_string(i) +
                                ", power " + std::to_string(n);
        if (V.dim(mu) == 0 || is_zero_vec(x)) {
          if (target != -1)
            fail("power of the operator vanishes while the companion power survives: " + tag);
          break;
        }
        Filtration<K>& F = filt.get(i, mu);
        if (target == -1) {
          if (!F.member(n + base + 1, x))
            fail("vanished companion power but the image misses the deep filtration level: " +
                 tag);
          continue;
        }
        const Mat<K>& deep = F.level(n + base + 1);
        Mat<K> A(V.dim(mu), deep.cols() + 1);
        A.col(0) = column(target);
        if (deep.cols() > 0) A.rightCols(deep.cols()) = deep;
        const auto sol = LinearSolver<K>(A).solve(x);
        if (!sol || FieldOps<K>::is_zero((*sol)[0]))
          fail("power of the image is not a unit multiple of the companion power modulo the "
               "deep filtration level: " +
               tag);
      }
    }

    // Per weight and level: the level subspace is spanned by the companion
    // images, and each level's elements are a basis of the quotient by the
    // next level.
    for (const auto& [mu, dim_mu] : V.dims) {
      Filtration<K>& F = filt.get(i, mu);
      const auto nodes_it = cert.at.find(mu);
      const std::vector<int> empty;
      const std::vector<int>& nodes = nodes_it == cert.at.end() ? empty : nodes_it->second;
      const Mat<K>& block = B.at(mu);
      for (std::int64_t n = 0; n <= F.top(); ++n) {
        std::vector<int> deep_nodes;   // raising walk of length >= n
        std::vector<int> level_nodes;  // filtration level exactly n
        for (int b : nodes) {
          if (raise_walk(b, i) >= n) deep_nodes.push_back(b);
          if (cert.ell[static_cast<std::size_t>(b)][si] == n) level_nodes.push_back(b);
        }
        Mat<K> span(dim_mu, static_cast<Eigen::Index>(deep_nodes.size()));
        for (std::size_t s = 0; s < deep_nodes.size(); ++s)
          span.col(static_cast<Eigen::Index>(s)) =
              block.col(cert.col[static_cast<std::size_t>(deep_nodes[s])]);
        if (!subspace_eq<K>(span, F.level(n)))
          fail("companion images do not span the filtration level " + std::to_string(n) +
               " at " + mu.to_string() + " for index " + std::to_string(i));

        const Mat<K>& next = F.level(n + 1);
        Mat<K> joined(dim_mu, next.cols() + static_cast<Eigen::Index>(level_nodes.size()));
        if (next.cols() > 0) joined.leftCols(next.cols()) = next;
        for (std::size_t s = 0; s < level_nodes.size(); ++s)
          joined.col(next.cols() + static_cast<Eigen::Index>(s)) =
              block.col(cert.col[static_cast<std::size_t>(level_nodes[s])]);
        const int quotient = F.rank_at(n) - F.rank_at(n + 1);
        if (rank_of<K>(joined) != F.rank_at(n + 1) + static_cast<int>(level_nodes.size()) ||
            quotient != static_cast<int>(level_nodes.size()))
          fail("level elements are not a basis of the quotient at level " + std::to_string(n) +
               " at " + mu.to_string() + " for index " + std::to_string(i));
      }
    }
  }
  return rep;
}

PreDualPerfectSpace<Scalar> space_from_model(const ModelOps& M) {
  const CartanDatum& d = *M.datum;
  const int r = d.size();

  std::vector<Content> all;
  Content cur(static_cast<std::size_t>(r), 0);
  auto enumerate = [&](auto&& self, int pos, std::int64_t budget) -> void {
    if (pos == r) {
      all.push_back(cur);
      return;
    }
    for (std::int64_t k = 0; k <= budget; ++k) {
      cur[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, budget - k);
    }
    cur[static_cast<std::size_t>(pos)] = 0;
  };
  enumerate(enumerate, 0, M.depth);

  std::map<Weight, int> dims;
  std::map<std::pair<int, Weight>, Mat<Scalar>> maps;
  for (const Content& c : all) {
    if (M.dim(c) == 0) continue;
    dims[M.weight(c)] = M.dim(c);
  }
  for (const Content& c : all) {
    if (M.dim(c) == 0 || height(c) + 1 > M.depth) continue;
    const Weight mu = M.weight(c);
    for (int i = 0; i < r; ++i) {
      Content down = c;
      down[static_cast<std::size_t>(i)] += 1;
      if (M.dim(down) == 0) continue;
      maps.emplace(std::pair{i, mu}, M.lower(i, c));
    }
  }
  return PreDualPerfectSpace<Scalar>::make(
      d, {M.weight(Content(static_cast<std::size_t>(r), 0))}, std::move(dims), std::move(maps));
}

GlobalGradedBasis basis_from_global(const ModelOps& M, const GeneratedCrystal& G,
                                    const std::vector<VecQq>& vectors) {
  std::map<Weight, std::vector<int>> groups;
  const int count = static_cast<int>(G.lattice.node_content.size());
  for (int b = 0; b < count; ++b)
    groups[M.weight(G.lattice.node_content[static_cast<std::size_t>(b)])].push_back(b);

  GlobalGradedBasis out;
  for (const auto& [mu, ids] : groups) {
    MatQq block(vectors[static_cast<std::size_t>(ids.front())].size(),
                static_cast<Eigen::Index>(ids.size()));
    for (std::size_t t = 0; t < ids.size(); ++t) {
      block.col(static_cast<Eigen::Index>(t)) = vectors[static_cast<std::size_t>(ids[t])];
      out.node_of.push_back(ids[t]);
    }
    out.basis.emplace(mu, std::move(block));
  }
  return out;
}

template struct PreDualPerfectSpace<Rational>;
template struct PreDualPerfectSpace<Scalar>;
template std::int64_t ell(const PreDualPerfectSpace<Rational>&, int, const Weight&,
                          const Vec<Rational>&);
template std::int64_t ell(const PreDualPerfectSpace<Scalar>&, int, const Weight&,
                          const Vec<Scalar>&);
template DualPerfectOutcome<Rational> verify_dual_perfect(const PreDualPerfectSpace<Rational>&,
                                                          const GradedBasis<Rational>&);
template DualPerfectOutcome<Scalar> verify_dual_perfect(const PreDualPerfectSpace<Scalar>&,
                                                        const GradedBasis<Scalar>&);
template AbstractCrystal extract_graph(const CartanDatum&,
                                       const DualPerfectCertificate<Rational>&);
template AbstractCrystal extract_graph(const CartanDatum&, const DualPerfectCertificate<Scalar>&);
template CrystalReport companion_power_suite(const PreDualPerfectSpace<Rational>&,
                                             const GradedBasis<Rational>&,
                                             const DualPerfectCertificate<Rational>&,
                                             std::int64_t);
template CrystalReport companion_power_suite(const PreDualPerfectSpace<Scalar>&,
                                             const GradedBasis<Scalar>&,
                                             const DualPerfectCertificate<Scalar>&, std::int64_t);

}  // namespace qgkm
