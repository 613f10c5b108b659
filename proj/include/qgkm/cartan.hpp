#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgkm/errors.hpp"
#include "qgkm/scalar.hpp"

namespace qgkm {

using MatI = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using VecI = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// An integral weight: coordinate vector in the ambient lattice P = Z^m.
/// Ordered lexicographically so it can key std::map deterministically.
struct Weight {
  std::vector<std::int64_t> coords;

  Weight() = default;
  explicit Weight(std::vector<std::int64_t> c) : coords(std::move(c)) {}
  static Weight zero(int m) { return Weight(std::vector<std::int64_t>(m, 0)); }

  int size() const { return static_cast<int>(coords.size()); }
  std::int64_t operator[](int k) const { return coords[static_cast<std::size_t>(k)]; }
  std::int64_t& operator[](int k) { return coords[static_cast<std::size_t>(k)]; }

  friend bool operator==(const Weight& a, const Weight& b) { return a.coords == b.coords; }
  friend bool operator!=(const Weight& a, const Weight& b) { return a.coords != b.coords; }
  friend bool operator<(const Weight& a, const Weight& b) { return a.coords < b.coords; }

  Weight operator+(const Weight& o) const;
  Weight operator-(const Weight& o) const;
  Weight scaled(std::int64_t k) const;

  std::string to_string() const;  // "(1,-2,0)"
};

std::ostream& operator<<(std::ostream& os, const Weight& w);

/// Multiplicity vector over the index set: beta = sum_i content[i] * alpha_i.
using Content = std::vector<std::int64_t>;

std::int64_t height(const Content& c);

/// Validated Borcherds-Cartan datum: integer matrix A with diagonal entries
/// equal to 2 (real index) or nonpositive even (imaginary index), nonpositive
/// off-diagonal entries with symmetric zero pattern, symmetrized by positive
/// integers s so that diag(s)*A is symmetric; plus an explicit realization of
/// simple roots, coweights and fundamental weights in an integer lattice.
class CartanDatum {
 public:
  /// Builds the minimal realization P = Z^{n+c} with c = n - rank(A): the
  /// coweights are the first n coordinate functionals, the fundamental
  /// weights are the first n coordinate vectors, and the simple roots are the
  /// columns of A extended by identity rows chosen greedily to make them
  /// linearly independent.
  static CartanDatum make(const MatI& A, const std::vector<std::int64_t>& s);

  /// Uses a caller-supplied realization; every defining equation is checked.
  static CartanDatum make(const MatI& A, const std::vector<std::int64_t>& s,
                          const MatI& alpha_columns, const MatI& coweight_rows,
                          const MatI& fundamental_columns);

  /// Report-style validation: returns one message per violated condition
  /// (empty means the pair (A, s) is a valid Borcherds-Cartan datum).
  static std::vector<std::string> violations(const MatI& A,
                                             const std::vector<std::int64_t>& s);

  int size() const { return static_cast<int>(A_.rows()); }  // |I|
  int lattice_rank() const { return static_cast<int>(alpha_.rows()); }
  std::int64_t a(int i, int j) const { return A_(i, j); }
  std::int64_t sym(int i) const { return s_[static_cast<std::size_t>(i)]; }
  bool real(int i) const { return A_(i, i) == 2; }
  bool imaginary(int i) const { return !real(i); }

  Weight simple_root(int i) const;
  Weight fundamental(int i) const;
  Weight zero_weight() const { return Weight::zero(lattice_rank()); }
  const MatI& alpha_matrix() const { return alpha_; }        // lattice_rank x n
  const MatI& coweight_matrix() const { return h_; }         // n x lattice_rank
  const MatI& fundamental_matrix() const { return lambda_; } // lattice_rank x n

  std::int64_t pair(int i, const Weight& mu) const;  // <h_i, mu>
  bool dominant(const Weight& mu) const;
  void require_dominant(const Weight& mu) const;  // throws NotDominant

  Scalar q_power(int i, std::int64_t e = 1) const;  // q_i^e = q^{s_i e}
  Scalar quantum_integer(int i, std::int64_t n) const;
  Scalar quantum_factorial(int i, std::int64_t n) const;
  Scalar quantum_binomial(int i, std::int64_t m, std::int64_t k) const;

  /// Solves beta = sum_i x_i * alpha_i; returns the (unique) integer solution
  /// if one exists, nullopt when beta is outside the rational span or the
  /// solution is non-integral.
  std::optional<Content> root_coordinates(const Weight& beta) const;
  /// True iff beta = sum_i k_i alpha_i with all k_i >= 0; fills coords.
  bool in_positive_root_lattice(const Weight& beta, Content* coords = nullptr) const;
  Weight lower_by(const Weight& lambda, const Content& content) const;

 private:
  CartanDatum() = default;

  MatI A_;
  std::vector<std::int64_t> s_;
  MatI alpha_;   // lattice_rank x n, column i = alpha_i
  MatI h_;       // n x lattice_rank, row i = h_i
  MatI lambda_;  // lattice_rank x n, column i = Lambda_i
};

}  // namespace qgkm
