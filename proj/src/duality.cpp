#include "qgkm/duality.hpp"

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

template <typename K>
Mat<K> identity_block(int n) {
  Mat<K> id(n, n);
  id.setZero();
  for (int k = 0; k < n; ++k) id(k, k) = K(1);
  return id;
}

// Kernels of the powers of one raising operator inside one weight space:
// levels[n] is a basis of ker e_i^n restricted to the weight (level 0 is the
// zero space), ascending to the whole space, which is always the last level.
template <typename K>
struct KernelFiltration {
  std::vector<Mat<K>> levels;
  std::vector<LinearSolver<K>> solvers;

  int top() const { return static_cast<int>(levels.size()) - 1; }
  const Mat<K>& level(std::int64_t n) const {
    return levels[static_cast<std::size_t>(std::min<std::int64_t>(n, top()))];
  }
  int rank_at(std::int64_t n) const {
    return solvers[static_cast<std::size_t>(std::min<std::int64_t>(n, top()))].rank();
  }
  bool member(std::int64_t n, const Vec<K>& v) const {
    return solvers[static_cast<std::size_t>(std::min<std::int64_t>(n, top()))].contains(v);
  }
  std::int64_t order_of(const Vec<K>& v) const {  // v must be nonzero
    std::int64_t n = 0;
    while (!solvers[static_cast<std::size_t>(std::min<std::int64_t>(n + 1, top()))].contains(v))
      ++n;
    return n;
  }
};

template <typename K>
KernelFiltration<K> build_kernel_filtration(const DualSpace<K>& D, int i, const Weight& mu) {
  KernelFiltration<K> F;
  const int d0 = D.dim(mu);
  Mat<K> comp = identity_block<K>(d0);  // n-fold power of e_i out of the mu piece
  const Weight alpha = D.datum.simple_root(i);
  Weight up = mu;
  while (true) {
    Mat<K> ker = kernel_basis(comp);
    const bool full = ker.cols() == d0;
    F.solvers.emplace_back(ker);
    F.levels.push_back(std::move(ker));
    if (full) break;
    if (D.dim(up + alpha) == 0) {
      // The next power is the zero map, so its kernel is the whole space.
      Mat<K> id = identity_block<K>(d0);
      F.solvers.emplace_back(id);
      F.levels.push_back(std::move(id));
      break;
    }
    comp = Mat<K>(D.e(i, up) * comp);
    up = up + alpha;
  }
  return F;
}

// Shared cache so each (index, weight) filtration is computed once.
template <typename K>
class KernelCache {
 public:
  explicit KernelCache(const DualSpace<K>& D) : D_(D) {}
  KernelFiltration<K>& get(int i, const Weight& mu) {
    auto it = store_.find({i, mu});
    if (it == store_.end())
      it = store_.emplace(std::pair{i, mu}, build_kernel_filtration(D_, i, mu)).first;
    return it->second;
  }

 private:
  const DualSpace<K>& D_;
  std::map<std::pair<int, Weight>, KernelFiltration<K>> store_;
};

}  // namespace

template <typename K>
int DualSpace<K>::dim(const Weight& mu) const {
  auto it = dims.find(mu);
  return it == dims.end() ? 0 : it->second;
}

template <typename K>
Mat<K> DualSpace<K>::e(int i, const Weight& mu) const {
  auto it = maps.find({i, mu});
  if (it != maps.end()) return it->second;
  Mat<K> zero(dim(mu + datum.simple_root(i)), dim(mu));
  zero.setZero();
  return zero;
}

template <typename K>
DualSpace<K> DualSpace<K>::make(CartanDatum d, std::vector<Weight> tops,
                                std::map<Weight, int> dims,
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
    if (i < 0 || i >= d.size()) throw InvalidDatum("raising map with an index out of range");
    const Eigen::Index from = dim_at(mu);
    const Eigen::Index to = dim_at(mu + d.simple_root(i));
    if (m.cols() != from || m.rows() != to)
      throw InvalidDatum("raising map at " + mu.to_string() + " has the wrong shape");
  }
  return DualSpace<K>{std::move(d), std::move(tops), std::move(dims), std::move(maps)};
}

template <typename K>
DualSpace<K> transpose_space(const PreDualPerfectSpace<K>& V) {
  DualSpace<K> D{V.datum, V.tops, V.dims, {}};
  for (const auto& [key, m] : V.maps) {
    if (m.rows() == 0 || m.cols() == 0) continue;
    const auto& [i, mu] = key;
    D.maps.emplace(std::pair{i, mu - V.datum.simple_root(i)}, Mat<K>(m.transpose()));
  }
  return D;
}

template <typename K>
PreDualPerfectSpace<K> transpose_space(const DualSpace<K>& D) {
  PreDualPerfectSpace<K> V{D.datum, D.tops, D.dims, {}};
  for (const auto& [key, m] : D.maps) {
    if (m.rows() == 0 || m.cols() == 0) continue;
    const auto& [i, mu] = key;
    V.maps.emplace(std::pair{i, mu + D.datum.simple_root(i)}, Mat<K>(m.transpose()));
  }
  return V;
}

template <typename K>
GradedBasis<K> dual_basis(const GradedBasis<K>& B) {
  GradedBasis<K> out;
  for (const auto& [mu, block] : B) {
    if (block.rows() != block.cols())
      throw NotABasis("basis block at " + mu.to_string() + " is not square");
    const Eigen::Index n = block.rows();
    LinearSolver<K> solver{Mat<K>(block.transpose())};
    if (solver.rank() != static_cast<int>(n))
      throw NotABasis("basis block at " + mu.to_string() + " is singular");
    Mat<K> inv_t(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      Vec<K> ek(n);
      ek.setZero();
      ek[k] = K(1);
      inv_t.col(k) = *solver.solve(ek);
    }
    out.emplace(mu, std::move(inv_t));
  }
  return out;
}

template <typename K>
std::int64_t vanishing_order(const DualSpace<K>& D, int i, const Weight& mu, const Vec<K>& v) {
  if (v.size() != D.dim(mu))
    throw InvalidDatum("vector size does not match the weight space at " + mu.to_string());
  if (is_zero_vec(v)) throw ZeroVector("vanishing order of the zero vector");
  return build_kernel_filtration(D, i, mu).order_of(v);
}

template <typename K>
PerfectOutcome<K> verify_perfect(const DualSpace<K>& D, const GradedBasis<K>& B) {
  PerfectOutcome<K> out;
  PerfectCertificate<K>& cert = out.certificate;
  const int r = D.datum.size();

  // Graded-basis precondition: one full-rank square block per nonzero weight.
  for (const auto& [mu, n] : D.dims) {
    auto it = B.find(mu);
    if (it == B.end() || it->second.rows() != n || it->second.cols() != n)
      throw NotABasis("candidate block at " + mu.to_string() + " does not match the weight space");
    if (rank_of<K>(it->second) != n)
      throw NotABasis("candidate block at " + mu.to_string() + " is rank deficient");
  }
  for (const auto& [mu, m] : B) {
    if (D.dim(mu) == 0 && m.cols() > 0)
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
  cert.order.assign(static_cast<std::size_t>(count), std::vector<std::int64_t>(r, 0));
  cert.e_map.assign(static_cast<std::size_t>(count), std::vector<int>(r, -1));
  cert.f_map.assign(static_cast<std::size_t>(count), std::vector<int>(r, -1));
  cert.coeff.assign(static_cast<std::size_t>(count),
                    std::vector<K>(static_cast<std::size_t>(r), K(0)));

  KernelCache<K> filt(D);
  for (const auto& [mu, ids] : cert.at) {
    const Mat<K>& block = B.at(mu);
    for (int i = 0; i < r; ++i) {
      KernelFiltration<K>& F = filt.get(i, mu);
      for (std::size_t t = 0; t < ids.size(); ++t)
        cert.order[static_cast<std::size_t>(ids[t])][static_cast<std::size_t>(i)] =
            F.order_of(block.col(static_cast<Eigen::Index>(t)));
    }
  }

  auto refute = [&out, &cert](int node, int i, std::string reason) {
    out.accepted = false;
    out.refutation = {node, i, cert.wt[static_cast<std::size_t>(node)], std::move(reason)};
  };

  // Expansion of each image over the elements one order down, modulo the
  // kernel level below them. Cached per (index, target weight, order).
  std::map<std::tuple<int, Weight, std::int64_t>, std::pair<std::vector<int>, LinearSolver<K>>>
      expanders;
  for (int i = 0; i < r; ++i) {
    for (const auto& [mu, ids] : cert.at) {
      const Mat<K>& block = B.at(mu);
      const Weight gamma = mu + D.datum.simple_root(i);
      const Mat<K> raise = D.e(i, mu);
      for (int b : ids) {
        const std::int64_t n = cert.order[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
        if (n == 0) continue;  // the image is already zero
        const Vec<K> x = Vec<K>(raise * block.col(cert.col[static_cast<std::size_t>(b)]));

        auto key = std::tuple{i, gamma, n};
        auto hit = expanders.find(key);
        if (hit == expanders.end()) {
          std::vector<int> family;
          auto git = cert.at.find(gamma);
          if (git != cert.at.end()) {
            for (int id : git->second)
              if (cert.order[static_cast<std::size_t>(id)][static_cast<std::size_t>(i)] == n - 1)
                family.push_back(id);
          }
          KernelFiltration<K>& FG = filt.get(i, gamma);
          const Mat<K>& deep = FG.level(n - 1);
          Mat<K> A(D.dim(gamma), static_cast<Eigen::Index>(family.size()) + deep.cols());
          const Mat<K>& gblock = B.at(gamma);
          for (std::size_t t = 0; t < family.size(); ++t)
            A.col(static_cast<Eigen::Index>(t)) =
                gblock.col(cert.col[static_cast<std::size_t>(family[t])]);
          if (deep.cols() > 0) A.rightCols(deep.cols()) = deep;
          LinearSolver<K> solver(A);
          if (solver.rank() != static_cast<int>(family.size()) + FG.rank_at(n - 1)) {
            refute(family.empty() ? b : family.front(), i,
                   "elements of one kernel level are dependent modulo the level below at " +
                       gamma.to_string());
            return out;
          }
          hit = expanders.emplace(key, std::pair{std::move(family), std::move(solver)}).first;
        }
        const auto& [family, solver] = hit->second;

        // Family columns are leftmost and independent modulo the kernel
        // block, so their coordinates in the particular solution are unique.
        const auto sol = solver.solve(x);
        if (!sol) {
          refute(b, i, "image leaves the span of the kernel level below");
          return out;
        }
        int touched = -1;
        bool multiple = false;
        for (std::size_t t = 0; t < family.size(); ++t) {
          if (FieldOps<K>::is_zero((*sol)[static_cast<Eigen::Index>(t)])) continue;
          if (touched != -1) {
            multiple = true;
            break;
          }
          touched = static_cast<int>(t);
        }
        if (multiple) {
          refute(b, i, "image touches more than one basis element modulo the kernel level below");
          return out;
        }
        if (touched == -1) {
          // Unreachable for exactly computed orders: the image never falls
          // below its own order. Kept as a refutation rather than an assert.
          refute(b, i, "image touches no basis element modulo the kernel level below");
          return out;
        }
        cert.e_map[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] =
            family[static_cast<std::size_t>(touched)];
        cert.coeff[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] =
            (*sol)[static_cast<Eigen::Index>(touched)];
      }
    }

    // Injectivity of the companion map on nonzero images.
    std::map<int, int> seen;
    for (int b = 0; b < count; ++b) {
      const int t = cert.e_map[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
      if (t == -1) continue;
      auto [it, fresh] = seen.try_emplace(t, b);
      if (!fresh) {
        refute(b, i, "two basis elements share one companion image: also " +
                         node_tag(it->second, cert.wt[static_cast<std::size_t>(it->second)]));
        return out;
      }
      cert.f_map[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = b;
    }
  }

  out.accepted = true;
  return out;
}

template <typename K>
CrystalReport kernel_level_suite(const DualSpace<K>& D, const GradedBasis<K>& B,
                                 const PerfectCertificate<K>& cert) {
  CrystalReport rep;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.violations.push_back(std::move(msg));
  };
  const int r = D.datum.size();
  const int count = cert.size();
  KernelCache<K> filt(D);

  auto column = [&B, &cert](int node) -> Vec<K> {
    return B.at(cert.wt[static_cast<std::size_t>(node)])
        .col(cert.col[static_cast<std::size_t>(node)]);
  };

  for (int i = 0; i < r; ++i) {
    const auto si = static_cast<std::size_t>(i);
    for (int b = 0; b < count; ++b) {
      const auto sb = static_cast<std::size_t>(b);
      const Weight& mu = cert.wt[sb];
      const std::string tag = node_tag(b, mu) + ", index " + std::to_string(i);

      // The order drops by exactly one along the companion map.
      const int t = cert.e_map[sb][si];
      if (t != -1 && cert.order[static_cast<std::size_t>(t)][si] != cert.order[sb][si] - 1)
        fail("companion image does not drop the vanishing order by one: " + tag);

      // An element has a companion preimage iff it lies in the image of the
      // raising operator plus its own kernel level.
      const bool in_range = cert.f_map[sb][si] != -1;
      const Weight below = mu - D.datum.simple_root(i);
      const Mat<K> image = D.dim(below) > 0 ? D.e(i, below) : Mat<K>(D.dim(mu), 0);
      const Mat<K>& ker = filt.get(i, mu).level(cert.order[sb][si]);
      const Mat<K> joined = hstack<K>({image, ker}, D.dim(mu));
      const bool in_span = LinearSolver<K>(joined).contains(Vec<K>(column(b)));
      if (in_range != in_span)
        fail("companion range membership disagrees with the image-plus-kernel test: " + tag);
    }

    // Per weight and power: the kernel is spanned by the elements of smaller
    // order, and each order's elements are a basis of the kernel quotient.
    for (const auto& [mu, dim_mu] : D.dims) {
      KernelFiltration<K>& F = filt.get(i, mu);
      const auto nodes_it = cert.at.find(mu);
      const std::vector<int> empty;
      const std::vector<int>& nodes = nodes_it == cert.at.end() ? empty : nodes_it->second;
      const Mat<K>& block = B.at(mu);
      for (std::int64_t n = 0; n <= F.top(); ++n) {
        std::vector<int> small;  // order < n
        std::vector<int> exact;  // order == n
        for (int b : nodes) {
          if (cert.order[static_cast<std::size_t>(b)][si] < n) small.push_back(b);
          if (cert.order[static_cast<std::size_t>(b)][si] == n) exact.push_back(b);
        }
        Mat<K> span(dim_mu, static_cast<Eigen::Index>(small.size()));
        for (std::size_t s = 0; s < small.size(); ++s)
          span.col(static_cast<Eigen::Index>(s)) =
              block.col(cert.col[static_cast<std::size_t>(small[s])]);
        if (!subspace_eq<K>(span, F.level(n)))
          fail("elements of smaller order do not span the kernel level " + std::to_string(n) +
               " at " + mu.to_string() + " for index " + std::to_string(i));

        Mat<K> joined(dim_mu, F.level(n).cols() + static_cast<Eigen::Index>(exact.size()));
        if (F.level(n).cols() > 0) joined.leftCols(F.level(n).cols()) = F.level(n);
        for (std::size_t s = 0; s < exact.size(); ++s)
          joined.col(F.level(n).cols() + static_cast<Eigen::Index>(s)) =
              block.col(cert.col[static_cast<std::size_t>(exact[s])]);
        if (rank_of<K>(joined) != F.rank_at(n) + static_cast<int>(exact.size()) ||
            F.rank_at(n) + static_cast<int>(exact.size()) != F.rank_at(n + 1))
          fail("order-" + std::to_string(n) +
               " elements are not a basis of the kernel quotient at " + mu.to_string() +
               " for index " + std::to_string(i));
      }
    }
  }
  return rep;
}

template <typename K>
TransposeDualityReport check_transpose_duality(const PreDualPerfectSpace<K>& V,
                                               const GradedBasis<K>& B) {
  TransposeDualityReport out;
  CrystalReport& rep = out.report;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.violations.push_back(std::move(msg));
  };

  const auto primal = verify_dual_perfect(V, B);
  const DualSpace<K> D = transpose_space(V);
  const GradedBasis<K> Bd = dual_basis(B);
  const auto dual = verify_perfect(D, Bd);
  out.primal_accepted = primal.accepted;
  out.dual_accepted = dual.accepted;

  if (primal.accepted != dual.accepted) {
    fail(std::string("only one side of the transpose is accepted: ") +
         (primal.accepted ? "the original basis" : "the dual basis"));
    return out;
  }
  if (!primal.accepted) return out;  // both refuted: the equivalence is consistent

  const auto& pc = primal.certificate;
  const auto& dc = dual.certificate;
  const int r = V.datum.size();
  for (int b = 0; b < pc.size(); ++b) {
    const auto sb = static_cast<std::size_t>(b);
    for (int i = 0; i < r; ++i) {
      const auto si = static_cast<std::size_t>(i);
      const std::string tag = node_tag(b, pc.wt[sb]) + ", index " + std::to_string(i);
      if (pc.ell[sb][si] != dc.order[sb][si])
        fail("filtration level and vanishing order differ: " + tag);
      if (pc.e_map[sb][si] != dc.e_map[sb][si])
        fail("raising companions differ through the transpose: " + tag);
      if (pc.f_map[sb][si] != dc.f_map[sb][si])
        fail("lowering companions differ through the transpose: " + tag);
      const int t = pc.f_map[sb][si];
      if (t != -1 && dc.e_map[static_cast<std::size_t>(t)][si] == b &&
          !FieldOps<K>::is_zero(pc.coeff[sb][si] -
                                dc.coeff[static_cast<std::size_t>(t)][si]))
        fail("companion coefficients differ through the transpose: " + tag);
    }
  }

  const CrystalReport suite = kernel_level_suite(D, Bd, dc);
  if (!suite.passed) {
    rep.passed = false;
    rep.violations.insert(rep.violations.end(), suite.violations.begin(),
                          suite.violations.end());
  }
  return out;
}

#define QGKM_INSTANTIATE_DUALITY(K)                                                        \
  template struct DualSpace<K>;                                                            \
  template DualSpace<K> transpose_space(const PreDualPerfectSpace<K>&);                    \
  template PreDualPerfectSpace<K> transpose_space(const DualSpace<K>&);                    \
  template GradedBasis<K> dual_basis(const GradedBasis<K>&);                               \
  template std::int64_t vanishing_order(const DualSpace<K>&, int, const Weight&,           \
                                        const Vec<K>&);                                    \
  template PerfectOutcome<K> verify_perfect(const DualSpace<K>&, const GradedBasis<K>&);   \
  template CrystalReport kernel_level_suite(const DualSpace<K>&, const GradedBasis<K>&,    \
                                            const PerfectCertificate<K>&);                 \
  template TransposeDualityReport check_transpose_duality(const PreDualPerfectSpace<K>&,   \
                                                          const GradedBasis<K>&);

QGKM_INSTANTIATE_DUALITY(Rational)
QGKM_INSTANTIATE_DUALITY(Scalar)

#undef QGKM_INSTANTIATE_DUALITY

}  // namespace qgkm
