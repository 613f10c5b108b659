#ifndef QGKM_LINALG_HPP
#define QGKM_LINALG_HPP

// Exact dense linear algebra over Q and Q(q), as free functions on Eigen
// matrices.  Elimination keeps every entry in canonical reduced form and picks
// pivots by least complexity (fewest stored terms/limbs), ties broken by
// position, so results and intermediate sizes are deterministic.
//
// Also contains column Hermite reduction over the Laurent subring Q[q,q^{-1}]
// (a Euclidean domain under exponent spread), used for integral-form
// membership tests.

#include <optional>
#include <vector>

#include "qgkm/scalar.hpp"

namespace qgkm {

template <class K>
bool is_zero_vec(const Vec<K>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!FieldOps<K>::is_zero(v[i])) return false;
  return true;
}

template <class K>
Mat<K> hstack(const std::vector<Mat<K>>& blocks, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Mat<K> out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    if (b.cols() > 0) out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Row reduction.  R = E * A with E invertible; pivot columns are the leftmost
// independent columns of A (pivot rows chosen by least complexity).
// ---------------------------------------------------------------------------
template <class K>
struct Rref {
  Mat<K> R;                     // reduced row echelon form of A
  Mat<K> E;                     // row operations: R = E * A
  std::vector<int> pivot_cols;  // strictly increasing, size = rank
  int rank = 0;
};

template <class K>
Rref<K> rref(const Mat<K>& A) {
  Rref<K> out;
  const Eigen::Index m = A.rows(), n = A.cols();
  out.R = A;
  out.E = Mat<K>(m, m);
  out.E.setZero();
  for (Eigen::Index i = 0; i < m; ++i) out.E(i, i) = K(1);
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < n && row < m; ++col) {
    // least-complexity pivot among rows >= row
    Eigen::Index pivot = -1;
    int best = 0;
    for (Eigen::Index r = row; r < m; ++r) {
      if (FieldOps<K>::is_zero(out.R(r, col))) continue;
      const int c = FieldOps<K>::complexity(out.R(r, col));
      if (pivot < 0 || c < best) {
        pivot = r;
        best = c;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      out.R.row(pivot).swap(out.R.row(row));
      out.E.row(pivot).swap(out.E.row(row));
    }
    const K inv = K(1) / out.R(row, col);
    out.R.row(row) *= inv;
    out.E.row(row) *= inv;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (r == row || FieldOps<K>::is_zero(out.R(r, col))) continue;
      const K factor = out.R(r, col);
      out.R.row(r) -= factor * out.R.row(row);
      out.E.row(r) -= factor * out.E.row(row);
    }
    out.pivot_cols.push_back(static_cast<int>(col));
    ++row;
  }
  out.rank = static_cast<int>(row);
  return out;
}

template <class K>
int rank_of(const Mat<K>& A) {
  return rref(A).rank;
}

// Basis of the kernel of A, one column per free variable, deterministic.
template <class K>
Mat<K> kernel_basis(const Mat<K>& A) {
  const Rref<K> f = rref(A);
  const Eigen::Index n = A.cols();
  std::vector<int> is_pivot(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < f.rank; ++j) is_pivot[static_cast<std::size_t>(f.pivot_cols[j])] = j;
  Mat<K> ker(n, n - f.rank);
  ker.setZero();
  Eigen::Index out_col = 0;
  for (Eigen::Index free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[static_cast<std::size_t>(free_col)] >= 0) continue;
    ker(free_col, out_col) = K(1);
    for (int j = 0; j < f.rank; ++j)
      ker(f.pivot_cols[j], out_col) = -f.R(j, free_col);
    ++out_col;
  }
  return ker;
}

// Repeated exact solves against a fixed matrix.
template <class K>
class LinearSolver {
 public:
  explicit LinearSolver(const Mat<K>& A) : cols_(A.cols()), f_(rref(A)) {}

  int rank() const { return f_.rank; }
  bool full_column_rank() const { return f_.rank == cols_; }

  // Particular solution with free variables set to zero, or nullopt if
  // inconsistent.  Unique when full_column_rank().
  std::optional<Vec<K>> solve(const Vec<K>& b) const {
    Vec<K> c = f_.E * b;
    for (Eigen::Index r = f_.rank; r < c.size(); ++r)
      if (!FieldOps<K>::is_zero(c[r])) return std::nullopt;
    Vec<K> x(cols_);
    for (Eigen::Index i = 0; i < cols_; ++i) x[i] = K(0);
    for (int j = 0; j < f_.rank; ++j) x[f_.pivot_cols[j]] = c[j];
    return x;
  }

  bool contains(const Vec<K>& b) const { return solve(b).has_value(); }

 private:
  Eigen::Index cols_;
  Rref<K> f_;
};

// Unique solution of A x = b; requires full column rank and consistency.
template <class K>
Vec<K> solve_unique(const Mat<K>& A, const Vec<K>& b) {
  LinearSolver<K> s(A);
  if (!s.full_column_rank()) throw Error("solve_unique: matrix has a nontrivial kernel");
  auto x = s.solve(b);
  if (!x) throw Error("solve_unique: inconsistent system");
  return *x;
}

template <class K>
bool in_column_space(const Mat<K>& A, const Vec<K>& v) {
  return LinearSolver<K>(A).contains(v);
}

// span(A) <= span(B) as subspaces of K^rows.
template <class K>
bool subspace_leq(const Mat<K>& A, const Mat<K>& B) {
  LinearSolver<K> s(B);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (!s.contains(Vec<K>(A.col(j)))) return false;
  }
  return true;
}

template <class K>
bool subspace_eq(const Mat<K>& A, const Mat<K>& B) {
  return rank_of(A) == rank_of(B) && subspace_leq(A, B);
}

// ---------------------------------------------------------------------------
// Incremental reduced column span.  Supports canonical reduction modulo the
// span (zeroes at pivot rows), membership, and growth.  Pivot choices are
// deterministic, so canonical representatives are reproducible for a fixed
// insertion order.
// ---------------------------------------------------------------------------
template <class K>
class ColumnSpan {
 public:
  explicit ColumnSpan(Eigen::Index dim) : dim_(dim), cols_(dim, 0) {}
  explicit ColumnSpan(const Mat<K>& vectors) : dim_(vectors.rows()), cols_(vectors.rows(), 0) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) add(vectors.col(j));
  }

  Eigen::Index dim() const { return dim_; }
  int rank() const { return static_cast<int>(cols_.cols()); }
  const Mat<K>& basis() const { return cols_; }

  // Canonical representative of v modulo the span; coords (if requested)
  // satisfy v = basis() * coords + representative.
  Vec<K> reduce(const Vec<K>& v, Vec<K>* coords = nullptr) const {
    Vec<K> r = v;
    if (coords) {
      coords->resize(cols_.cols());
      for (Eigen::Index j = 0; j < cols_.cols(); ++j) (*coords)[j] = K(0);
    }
    for (Eigen::Index j = 0; j < cols_.cols(); ++j) {
      const K c = r[pivot_rows_[static_cast<std::size_t>(j)]];
      if (FieldOps<K>::is_zero(c)) continue;
      r -= c * cols_.col(j);
      if (coords) (*coords)[j] = c;
    }
    return r;
  }

  bool contains(const Vec<K>& v) const { return is_zero_vec<K>(reduce(v)); }

  // Adds v to the span; returns true when the span grew.
  bool add(const Vec<K>& v) {
    Vec<K> r = reduce(v);
    Eigen::Index pivot = -1;
    int best = 0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (FieldOps<K>::is_zero(r[i])) continue;
      const int c = FieldOps<K>::complexity(r[i]);
      if (pivot < 0 || c < best) {
        pivot = i;
        best = c;
      }
    }
    if (pivot < 0) return false;
    r *= K(1) / r[pivot];
    // eliminate the new pivot row from existing columns
    for (Eigen::Index j = 0; j < cols_.cols(); ++j) {
      const K c = cols_(pivot, j);
      if (!FieldOps<K>::is_zero(c)) cols_.col(j) -= c * r;
    }
    cols_.conservativeResize(Eigen::NoChange, cols_.cols() + 1);
    cols_.col(cols_.cols() - 1) = r;
    pivot_rows_.push_back(pivot);
    return true;
  }

 private:
  Eigen::Index dim_;
  Mat<K> cols_;
  std::vector<Eigen::Index> pivot_rows_;
};

// ---------------------------------------------------------------------------
// Column Hermite reduction over the Laurent subring A = Q[q,q^{-1}] of Q(q).
// A is Euclidean under spread(f) = hi(f) - lo(f); units are the monomials.
// Used to decide membership of a vector in the A-span of given columns
// (integral-form checks).  All entries must be Laurent.
// ---------------------------------------------------------------------------
namespace laurent {

// a = b*s + r with r == 0 or spread(r) < spread(b); all Laurent.
inline void div_mod(const Scalar& a, const Scalar& b, Scalar* s, Scalar* r) {
  if (b.is_zero()) throw DivisionByZero("laurent::div_mod by zero");
  if (a.is_zero()) {
    *s = Scalar(0);
    *r = Scalar(0);
    return;
  }
  const LaurentPoly an = a.num(), bn = b.num();
  // shift both to ordinary polynomials, divide, shift back
  const std::int64_t la = an.lo(), lb = bn.lo();
  LaurentPoly a0 = an.shifted(-la), b0 = bn.shifted(-lb);
  // schoolbook division by descending degree
  LaurentPoly quot;
  LaurentPoly rem = a0;
  const std::int64_t db = b0.hi();
  const Rational lead = b0.coeff(db);
  while (!rem.is_zero() && rem.hi() >= db) {
    LaurentPoly t = LaurentPoly::monomial(rem.coeff(rem.hi()) / lead, rem.hi() - db);
    quot += t;
    rem -= t * b0;
  }
  *s = Scalar(quot.shifted(la - lb));
  *r = Scalar(rem.shifted(la));
}

inline std::int64_t spread(const Scalar& a) {
  return a.num().hi() - a.num().lo();
}

// Triangular column basis over A of the A-module spanned by the given columns:
// pivot rows strictly increase and later columns vanish at earlier pivot rows.
struct HermiteBasis {
  MatQq columns;                 // dim x k
  std::vector<Eigen::Index> pivot_rows;
};

inline HermiteBasis column_basis(const MatQq& gens) {
  const Eigen::Index m = gens.rows();
  std::vector<VecQq> work;
  for (Eigen::Index j = 0; j < gens.cols(); ++j) {
    for (Eigen::Index i = 0; i < m; ++i)
      if (!gens(i, j).is_zero() && !gens(i, j).is_laurent())
        throw Error("laurent::column_basis: entry not in Q[q,q^-1]");
    if (!is_zero_vec<Scalar>(gens.col(j))) work.push_back(gens.col(j));
  }
  HermiteBasis out;
  out.columns = MatQq(m, 0);
  for (Eigen::Index row = 0; row < m; ++row) {
    // columns still active (not yet assigned a pivot) with nonzero entry here
    std::vector<std::size_t> active;
    for (std::size_t t = 0; t < work.size(); ++t)
      if (!work[t][row].is_zero()) active.push_back(t);
    if (active.empty()) continue;
    // Euclidean reduction at this row until a single column remains nonzero
    while (active.size() > 1) {
      std::size_t best = 0;
      for (std::size_t t = 1; t < active.size(); ++t)
        if (spread(work[active[t]][row]) < spread(work[active[best]][row])) best = t;
      const std::size_t pv = active[best];
      std::vector<std::size_t> next = {pv};
      for (std::size_t t = 0; t < active.size(); ++t) {
        const std::size_t idx = active[t];
        if (idx == pv) continue;
        Scalar s, r;
        div_mod(work[idx][row], work[pv][row], &s, &r);
        work[idx] -= s * work[pv];
        if (!work[idx][row].is_zero()) next.push_back(idx);
      }
      active = next;
    }
    const std::size_t pv = active[0];
    out.columns.conservativeResize(Eigen::NoChange, out.columns.cols() + 1);
    out.columns.col(out.columns.cols() - 1) = work[pv];
    out.pivot_rows.push_back(row);
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(pv));
    // zero columns can be dropped
    std::vector<VecQq> kept;
    for (auto& w : work)
      if (!is_zero_vec<Scalar>(w)) kept.push_back(std::move(w));
    work = std::move(kept);
  }
  return out;
}

// Does t lie in the A-span of the Hermite basis?
inline bool contains(const HermiteBasis& basis, const VecQq& t) {
  VecQq r = t;
  for (Eigen::Index j = 0; j < basis.columns.cols(); ++j) {
    const Eigen::Index row = basis.pivot_rows[static_cast<std::size_t>(j)];
    if (r[row].is_zero()) continue;
    if (!r[row].is_laurent()) return false;
    Scalar s, rem;
    div_mod(r[row], basis.columns(row, j), &s, &rem);
    if (!rem.is_zero()) return false;
    r -= s * basis.columns.col(j);
  }
  return is_zero_vec<Scalar>(r);
}

}  // namespace laurent

// Residue of a Q(q) vector at q=0 entrywise; throws PoleAtZero on poles.
inline VecQ residue_at_zero(const VecQq& v) {
  VecQ r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = v[i].eval0();
  return r;
}

inline VecQq bar(const VecQq& v) {
  VecQq r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = v[i].bar();
  return r;
}

inline MatQq bar(const MatQq& m) {
  MatQq r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).bar();
  return r;
}

// Lift a rational matrix/vector into Q(q).
inline MatQq lift_to_qq(const MatQ& m) {
  MatQq r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Scalar(m(i, j));
  return r;
}

template <class K>
Mat<K> mat_power(const Mat<K>& A, int n) {
  Mat<K> acc(A.rows(), A.cols());
  acc.setZero();
  for (Eigen::Index i = 0; i < A.rows(); ++i) acc(i, i) = K(1);
  for (int k = 0; k < n; ++k) acc = A * acc;
  return acc;
}

}  // namespace qgkm

#endif
