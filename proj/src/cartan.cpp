#include "qgkm/cartan.hpp"

#include <sstream>

#include "qgkm/linalg.hpp"

namespace qgkm {

Weight Weight::operator+(const Weight& o) const {
  Weight r = *this;
  for (std::size_t k = 0; k < coords.size(); ++k) r.coords[k] += o.coords[k];
  return r;
}

Weight Weight::operator-(const Weight& o) const {
  Weight r = *this;
  for (std::size_t k = 0; k < coords.size(); ++k) r.coords[k] -= o.coords[k];
  return r;
}

Weight Weight::scaled(std::int64_t k) const {
  Weight r = *this;
  for (auto& c : r.coords) c *= k;
  return r;
}

std::string Weight::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (k) os << ',';
    os << coords[k];
  }
  os << ')';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << w.to_string(); }

std::int64_t height(const Content& c) {
  std::int64_t h = 0;
  for (auto k : c) h += k;
  return h;
}

namespace {

MatQ to_rational(const MatI& m) {
  MatQ r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Rational(static_cast<long>(m(i, j)));
  return r;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}

/// Checks the defining equations of a realization; returns violation messages.
std::vector<std::string> realization_violations(const MatI& A, const MatI& alpha, const MatI& h,
                                                const MatI& lambda) {
  std::vector<std::string> out;
  const Eigen::Index n = A.rows();
  const Eigen::Index m = alpha.rows();
  if (h.rows() != n || h.cols() != m || lambda.rows() != m || lambda.cols() != n ||
      alpha.cols() != n) {
    out.push_back("realization matrices have inconsistent shapes");
    return out;
  }
  const MatI pairing = h * alpha;  // n x n, should equal A
  if (!(pairing - A).isZero(0)) out.push_back("<h_i, alpha_j> does not reproduce the matrix A");
  const MatI delta = h * lambda;  // n x n, should be identity
  if (!(delta - MatI::Identity(n, n)).isZero(0))
    out.push_back("<h_i, Lambda_j> is not the identity pairing");
  if (rank_of(to_rational(alpha)) != static_cast<int>(n))
    out.push_back("simple roots are linearly dependent");
  return out;
}

}  // namespace

std::vector<std::string> CartanDatum::violations(const MatI& A,
                                                 const std::vector<std::int64_t>& s) {
  std::vector<std::string> out;
  if (A.rows() != A.cols()) {
    out.push_back("matrix is not square");
    return out;
  }
  const int n = static_cast<int>(A.rows());
  if (static_cast<int>(s.size()) != n) {
    out.push_back("symmetrizer length does not match the matrix size");
    return out;
  }
  auto idx = [](int i, int j) {
    std::ostringstream os;
    os << '(' << i << ',' << j << ')';
    return os.str();
  };
  for (int i = 0; i < n; ++i) {
    if (s[static_cast<std::size_t>(i)] < 1) {
      out.push_back("symmetrizer entry s_" + std::to_string(i) + " = " +
                    std::to_string(s[static_cast<std::size_t>(i)]) + " is not positive");
    }
  }
  for (int i = 0; i < n; ++i) {
    const std::int64_t d = A(i, i);
    if (!(d == 2 || (d <= 0 && d % 2 == 0))) {
      out.push_back("diagonal entry a_" + idx(i, i) + " = " + std::to_string(d) +
                    " is neither 2 nor a nonpositive even integer");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && A(i, j) > 0) {
        out.push_back("off-diagonal entry a_" + idx(i, j) + " = " + std::to_string(A(i, j)) +
                      " is positive");
      }
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if ((A(i, j) == 0) != (A(j, i) == 0)) {
        out.push_back("zero pattern asymmetric at " + idx(i, j) + ": a_ij = 0 must hold iff a_ji = 0");
      }
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (s[static_cast<std::size_t>(i)] * A(i, j) != s[static_cast<std::size_t>(j)] * A(j, i)) {
        out.push_back("diag(s)*A is not symmetric at " + idx(i, j));
      }
    }
  return out;
}

CartanDatum CartanDatum::make(const MatI& A, const std::vector<std::int64_t>& s) {
  auto bad = violations(A, s);
  if (!bad.empty()) throw InvalidDatum(join(bad, "; "));
  const int n = static_cast<int>(A.rows());

  // Greedily append identity rows to A until its columns become independent.
  MatQ stacked = to_rational(A);
  int rank = rank_of(stacked);
  std::vector<int> completion;
  for (int k = 0; k < n && rank < n; ++k) {
    MatQ trial(stacked.rows() + 1, n);
    trial.topRows(stacked.rows()) = stacked;
    for (int j = 0; j < n; ++j) trial(stacked.rows(), j) = Rational(j == k ? 1 : 0);
    const int r = rank_of(trial);
    if (r > rank) {
      stacked = trial;
      rank = r;
      completion.push_back(k);
    }
  }
  const int c = static_cast<int>(completion.size());
  const int m = n + c;

  CartanDatum d;
  d.A_ = A;
  d.s_ = s;
  d.alpha_ = MatI::Zero(m, n);
  d.alpha_.topRows(n) = A;
  for (int t = 0; t < c; ++t) d.alpha_(n + t, completion[static_cast<std::size_t>(t)]) = 1;
  d.h_ = MatI::Zero(n, m);
  d.h_.leftCols(n).setIdentity();
  d.lambda_ = MatI::Zero(m, n);
  d.lambda_.topRows(n).setIdentity();

  auto check = realization_violations(d.A_, d.alpha_, d.h_, d.lambda_);
  if (!check.empty()) throw InvalidDatum("internal realization failure: " + join(check, "; "));
  return d;
}

CartanDatum CartanDatum::make(const MatI& A, const std::vector<std::int64_t>& s,
                              const MatI& alpha_columns, const MatI& coweight_rows,
                              const MatI& fundamental_columns) {
  auto bad = violations(A, s);
  auto real_bad = realization_violations(A, alpha_columns, coweight_rows, fundamental_columns);
  bad.insert(bad.end(), real_bad.begin(), real_bad.end());
  if (!bad.empty()) throw InvalidDatum(join(bad, "; "));
  CartanDatum d;
  d.A_ = A;
  d.s_ = s;
  d.alpha_ = alpha_columns;
  d.h_ = coweight_rows;
  d.lambda_ = fundamental_columns;
  return d;
}

Weight CartanDatum::simple_root(int i) const {
  std::vector<std::int64_t> c(static_cast<std::size_t>(lattice_rank()));
  for (int k = 0; k < lattice_rank(); ++k) c[static_cast<std::size_t>(k)] = alpha_(k, i);
  return Weight(std::move(c));
}

Weight CartanDatum::fundamental(int i) const {
  std::vector<std::int64_t> c(static_cast<std::size_t>(lattice_rank()));
  for (int k = 0; k < lattice_rank(); ++k) c[static_cast<std::size_t>(k)] = lambda_(k, i);
  return Weight(std::move(c));
}

std::int64_t CartanDatum::pair(int i, const Weight& mu) const {
  std::int64_t v = 0;
  for (int k = 0; k < lattice_rank(); ++k) v += h_(i, k) * mu[k];
  return v;
}

bool CartanDatum::dominant(const Weight& mu) const {
  for (int i = 0; i < size(); ++i)
    if (pair(i, mu) < 0) return false;
  return true;
}

void CartanDatum::require_dominant(const Weight& mu) const {
  for (int i = 0; i < size(); ++i) {
    if (pair(i, mu) < 0) {
      throw NotDominant("weight " + mu.to_string() + " has <h_" + std::to_string(i) +
                        ", mu> = " + std::to_string(pair(i, mu)) + " < 0");
    }
  }
}

Scalar CartanDatum::q_power(int i, std::int64_t e) const {
  return Scalar::q(sym(i) * e);
}

Scalar CartanDatum::quantum_integer(int i, std::int64_t n) const { return qint(n, sym(i)); }

Scalar CartanDatum::quantum_factorial(int i, std::int64_t n) const { return qfact(n, sym(i)); }

Scalar CartanDatum::quantum_binomial(int i, std::int64_t m, std::int64_t k) const {
  return qbinom(m, k, sym(i));
}

std::optional<Content> CartanDatum::root_coordinates(const Weight& beta) const {
  VecQ rhs(lattice_rank());
  for (int k = 0; k < lattice_rank(); ++k) rhs(k) = Rational(static_cast<long>(beta[k]));
  LinearSolver<Rational> solver(to_rational(alpha_));
  auto x = solver.solve(rhs);
  if (!x) return std::nullopt;
  Content out(static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i) {
    Rational v = (*x)(i);
    if (v.get_den() != 1) return std::nullopt;
    out[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(v.get_num().get_si());
  }
  return out;
}

bool CartanDatum::in_positive_root_lattice(const Weight& beta, Content* coords) const {
  auto x = root_coordinates(beta);
  if (!x) return false;
  for (auto k : *x)
    if (k < 0) return false;
  if (coords) *coords = *x;
  return true;
}

Weight CartanDatum::lower_by(const Weight& lambda, const Content& content) const {
  Weight mu = lambda;
  for (int i = 0; i < size(); ++i) {
    const std::int64_t k = content[static_cast<std::size_t>(i)];
    if (k == 0) continue;
    mu = mu - simple_root(i).scaled(k);
  }
  return mu;
}

}  // namespace qgkm
