#ifndef QGKM_SCALAR_HPP
#define QGKM_SCALAR_HPP

// Exact arithmetic tower for the rational function field Q(q):
//
//   Rational     -- arbitrary-precision rational (GMP mpq_class)
//   LaurentPoly  -- Laurent polynomial in q over Rational, canonical trimmed form
//   Scalar       -- element of Q(q) as a reduced fraction num/den of Laurent
//                   polynomials, with the denominator normalized to a true
//                   polynomial with constant term 1.
//
// The normal form makes the local data at q=0 immediate: for nonzero s,
// val0(s) = lowest exponent of the numerator, s is regular at 0 iff val0 >= 0,
// and eval0(s) = constant coefficient of the numerator (0 if val0 > 0).
// bar() is the field involution q -> q^{-1}.  No floating point anywhere.

#include <gmpxx.h>

#include <Eigen/Core>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qgkm/errors.hpp"

namespace qgkm {

using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r);
std::size_t hash_of(const Rational& r);

// ---------------------------------------------------------------------------
// LaurentPoly: dense coefficient block starting at exponent lo_.  Invariant:
// coefficients_ is empty iff the polynomial is zero; otherwise the first and
// last entries are nonzero.
// ---------------------------------------------------------------------------
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(const Rational& constant) { *this = monomial(constant, 0); }
  explicit LaurentPoly(long constant) { *this = monomial(rational(constant), 0); }

  static LaurentPoly monomial(const Rational& coeff, std::int64_t exponent);
  static LaurentPoly q_power(std::int64_t exponent) { return monomial(rational(1), exponent); }

  bool is_zero() const { return coefficients_.empty(); }
  bool is_one() const;

  // Lowest / highest exponent with nonzero coefficient; only valid when nonzero.
  std::int64_t lo() const;
  std::int64_t hi() const;
  Rational coeff(std::int64_t exponent) const;
  int term_count() const;

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& other) const;
  LaurentPoly operator-(const LaurentPoly& other) const;
  LaurentPoly operator*(const LaurentPoly& other) const;
  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  bool operator==(const LaurentPoly& other) const;
  bool operator!=(const LaurentPoly& other) const { return !(*this == other); }

  LaurentPoly scaled(const Rational& c) const;      // c * this
  LaurentPoly shifted(std::int64_t d) const;        // q^d * this
  LaurentPoly bar() const;                          // q -> q^{-1}

  // Monic gcd of the polynomial parts (both arguments nonzero); result has
  // lo() == 0 and leading coefficient 1.
  static LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);

  // Exact division; throws DivisionByZero on zero divisor, ParseError never,
  // and asserts exactness (remainder must vanish).
  static LaurentPoly div_exact(const LaurentPoly& a, const LaurentPoly& b);

  std::string to_string() const;

 private:
  void trim();
  // Division with remainder for lo()==0 polynomials, by descending degree.
  static void div_mod(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly* quot,
                      LaurentPoly* rem);

  std::int64_t lo_ = 0;
  std::vector<Rational> coefficients_;  // coefficient of q^{lo_ + k} at index k
};

// ---------------------------------------------------------------------------
// Scalar: reduced fraction in Q(q).
// ---------------------------------------------------------------------------
class Scalar {
 public:
  Scalar() : num_(), den_(LaurentPoly(1)) {}
  Scalar(long n) : num_(LaurentPoly(n)), den_(LaurentPoly(1)) {}  // NOLINT: implicit
  explicit Scalar(const Rational& r) : num_(LaurentPoly(r)), den_(LaurentPoly(1)) {}
  explicit Scalar(const LaurentPoly& p) : num_(p), den_(LaurentPoly(1)) {}
  Scalar(const LaurentPoly& num, const LaurentPoly& den);

  static Scalar q(std::int64_t exponent = 1) { return Scalar(LaurentPoly::q_power(exponent)); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_laurent() const { return den_.is_one(); }  // member of Z[q,q^{-1}] over Q

  Scalar operator-() const;
  Scalar operator+(const Scalar& other) const;
  Scalar operator-(const Scalar& other) const;
  Scalar operator*(const Scalar& other) const;
  Scalar operator/(const Scalar& other) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  bool operator==(const Scalar& other) const;
  bool operator!=(const Scalar& other) const { return !(*this == other); }

  Scalar inverse() const;
  Scalar pow(std::int64_t e) const;
  Scalar bar() const;  // q -> q^{-1}

  // Order of vanishing at q = 0 (only valid for nonzero scalars).
  std::int64_t val0() const;
  bool is_regular_at_zero() const { return is_zero() || val0() >= 0; }
  // Value at q = 0; throws PoleAtZero when not regular there.
  Rational eval0() const;

  // Size measure used for pivot selection: total number of nonzero terms.
  int complexity() const { return num_.term_count() + den_.term_count(); }

  std::string to_string() const;

 private:
  void normalize();
  LaurentPoly num_, den_;
};

inline Scalar operator*(long a, const Scalar& s) { return Scalar(a) * s; }

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) {
  return os << p.to_string();
}
inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

// Parses the expression grammar used in JSON/CLI payloads: integer literals,
// `q`, `^` with integer exponent, `+ - * /`, unary minus, parentheses.
Scalar parse_scalar(const std::string& text);

std::size_t hash_of(const Scalar& s);

// ---------------------------------------------------------------------------
// Quantum integers for a fixed symmetrizing entry s_i (so q_i = q^{s_i}):
// qint(n, s)  = (q_i^n - q_i^{-n}) / (q_i - q_i^{-1}),  qint(-n) = -qint(n)
// qfact(n, s) = [n]! ;  qbinom(m, k, s) = [m]! / ([k]! [m-k]!)
// ---------------------------------------------------------------------------
Scalar qint(std::int64_t n, std::int64_t s);
Scalar qfact(std::int64_t n, std::int64_t s);
Scalar qbinom(std::int64_t m, std::int64_t k, std::int64_t s);

// ---------------------------------------------------------------------------
// Eigen interop: dense matrices/vectors over an exact scalar.
// ---------------------------------------------------------------------------
template <class K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;

using MatQq = Mat<Scalar>;    // over Q(q)
using VecQq = Vec<Scalar>;
using MatQ = Mat<Rational>;   // over Q (residues, classical limits)
using VecQ = Vec<Rational>;

std::size_t hash_of(const VecQ& v);

// Field glue used by the templated linear algebra: pivot complexity and the
// zero test, uniform over Q and Q(q).
template <class K>
struct FieldOps;

template <>
struct FieldOps<Rational> {
  static bool is_zero(const Rational& x) { return x == 0; }
  static int complexity(const Rational& x) {
    return static_cast<int>(mpz_sizeinbase(x.get_num().get_mpz_t(), 2) +
                            mpz_sizeinbase(x.get_den().get_mpz_t(), 2));
  }
  static std::string str(const Rational& x) { return to_string(x); }
};

template <>
struct FieldOps<Scalar> {
  static bool is_zero(const Scalar& x) { return x.is_zero(); }
  static int complexity(const Scalar& x) { return x.complexity(); }
  static std::string str(const Scalar& x) { return x.to_string(); }
};

}  // namespace qgkm

namespace Eigen {

template <>
struct NumTraits<qgkm::Rational> : GenericNumTraits<qgkm::Rational> {
  typedef qgkm::Rational Real;
  typedef qgkm::Rational NonInteger;
  typedef qgkm::Rational Nested;
  typedef qgkm::Rational Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 40,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<qgkm::Scalar> : GenericNumTraits<qgkm::Scalar> {
  typedef qgkm::Scalar Real;
  typedef qgkm::Scalar NonInteger;
  typedef qgkm::Scalar Nested;
  typedef qgkm::Scalar Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 200,
    MulCost = 200,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

#endif
