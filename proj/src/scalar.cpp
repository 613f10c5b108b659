#include "qgkm/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>
#include <sstream>

namespace qgkm {

std::string to_string(const Rational& r) {
  return r.get_str();  // canonical "p/q" or "p"
}

std::size_t hash_of(const Rational& r) {
  return std::hash<std::string>()(r.get_str(16));
}

std::size_t hash_of(const VecQ& v) {
  std::size_t h = static_cast<std::size_t>(v.size()) * 1469598103934665603ull;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    h ^= hash_of(v[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------------------
// LaurentPoly
// ---------------------------------------------------------------------------

void LaurentPoly::trim() {
  std::size_t front = 0;
  while (front < coefficients_.size() && coefficients_[front] == 0) ++front;
  if (front == coefficients_.size()) {
    coefficients_.clear();
    lo_ = 0;
    return;
  }
  std::size_t back = coefficients_.size();
  while (back > front && coefficients_[back - 1] == 0) --back;
  if (front > 0 || back < coefficients_.size()) {
    std::vector<Rational> kept(coefficients_.begin() + static_cast<std::ptrdiff_t>(front),
                               coefficients_.begin() + static_cast<std::ptrdiff_t>(back));
    coefficients_ = std::move(kept);
    lo_ += static_cast<std::int64_t>(front);
  }
}

LaurentPoly LaurentPoly::monomial(const Rational& coeff, std::int64_t exponent) {
  LaurentPoly p;
  if (coeff != 0) {
    p.lo_ = exponent;
    p.coefficients_ = {coeff};
  }
  return p;
}

bool LaurentPoly::is_one() const {
  return coefficients_.size() == 1 && lo_ == 0 && coefficients_[0] == 1;
}

std::int64_t LaurentPoly::lo() const {
  assert(!is_zero());
  return lo_;
}

std::int64_t LaurentPoly::hi() const {
  assert(!is_zero());
  return lo_ + static_cast<std::int64_t>(coefficients_.size()) - 1;
}

Rational LaurentPoly::coeff(std::int64_t exponent) const {
  if (is_zero() || exponent < lo_ || exponent > hi()) return Rational(0);
  return coefficients_[static_cast<std::size_t>(exponent - lo_)];
}

int LaurentPoly::term_count() const {
  int n = 0;
  for (const Rational& c : coefficients_)
    if (c != 0) ++n;
  return n;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (Rational& c : r.coefficients_) c = -c;
  return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& other) const {
  if (is_zero()) return other;
  if (other.is_zero()) return *this;
  const std::int64_t lo = std::min(lo_, other.lo_);
  const std::int64_t hi_exp = std::max(hi(), other.hi());
  LaurentPoly r;
  r.lo_ = lo;
  r.coefficients_.assign(static_cast<std::size_t>(hi_exp - lo + 1), Rational(0));
  for (std::size_t k = 0; k < coefficients_.size(); ++k)
    r.coefficients_[static_cast<std::size_t>(lo_ - lo) + k] += coefficients_[k];
  for (std::size_t k = 0; k < other.coefficients_.size(); ++k)
    r.coefficients_[static_cast<std::size_t>(other.lo_ - lo) + k] += other.coefficients_[k];
  r.trim();
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& other) const { return *this + (-other); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& other) const {
  if (is_zero() || other.is_zero()) return LaurentPoly();
  LaurentPoly r;
  r.lo_ = lo_ + other.lo_;
  r.coefficients_.assign(coefficients_.size() + other.coefficients_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i] == 0) continue;
    for (std::size_t j = 0; j < other.coefficients_.size(); ++j) {
      if (other.coefficients_[j] == 0) continue;
      r.coefficients_[i + j] += coefficients_[i] * other.coefficients_[j];
    }
  }
  r.trim();
  return r;
}

bool LaurentPoly::operator==(const LaurentPoly& other) const {
  return lo_ == other.lo_ && coefficients_ == other.coefficients_;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (c == 0) return LaurentPoly();
  LaurentPoly r = *this;
  for (Rational& x : r.coefficients_) x *= c;
  return r;
}

LaurentPoly LaurentPoly::shifted(std::int64_t d) const {
  LaurentPoly r = *this;
  if (!r.is_zero()) r.lo_ += d;
  return r;
}

LaurentPoly LaurentPoly::bar() const {
  if (is_zero()) return LaurentPoly();
  LaurentPoly r;
  r.lo_ = -hi();
  r.coefficients_.assign(coefficients_.rbegin(), coefficients_.rend());
  return r;
}

void LaurentPoly::div_mod(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly* quot,
                          LaurentPoly* rem) {
  assert(!b.is_zero() && b.lo() == 0 && (a.is_zero() || a.lo() >= 0));
  LaurentPoly q;
  LaurentPoly r = a;
  const std::int64_t db = b.hi();
  const Rational lead_b = b.coeff(db);
  while (!r.is_zero() && r.hi() >= db) {
    const std::int64_t shift = r.hi() - db;
    const Rational factor = r.coeff(r.hi()) / lead_b;
    LaurentPoly t = LaurentPoly::monomial(factor, shift);
    q += t;
    r -= t * b;
  }
  if (quot) *quot = q;
  if (rem) *rem = r;
}

LaurentPoly LaurentPoly::gcd(const LaurentPoly& a, const LaurentPoly& b) {
  assert(!a.is_zero() && !b.is_zero());
  LaurentPoly r0 = a.shifted(-a.lo());
  LaurentPoly r1 = b.shifted(-b.lo());
  while (!r1.is_zero()) {
    LaurentPoly rem;
    div_mod(r0, r1, nullptr, &rem);
    r0 = r1;
    r1 = rem.is_zero() ? rem : rem.shifted(-rem.lo());
  }
  return r0.scaled(Rational(1) / r0.coeff(r0.hi()));  // monic
}

LaurentPoly LaurentPoly::div_exact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw DivisionByZero("exact Laurent division by zero");
  if (a.is_zero()) return LaurentPoly();
  const std::int64_t shift = a.lo() - b.lo();
  LaurentPoly q, r;
  div_mod(a.shifted(-a.lo()), b.shifted(-b.lo()), &q, &r);
  assert(r.is_zero() && "div_exact called on a non-multiple");
  return q.shifted(shift);
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    const Rational& c = coefficients_[k];
    if (c == 0) continue;
    const std::int64_t e = lo_ + static_cast<std::int64_t>(k);
    Rational abs_c = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? "-" : "+");
    }
    if (e == 0) {
      out << qgkm::to_string(abs_c);
    } else {
      if (abs_c != 1) out << qgkm::to_string(abs_c) << "*";
      out << "q";
      if (e != 1) out << "^" << e;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

Scalar::Scalar(const LaurentPoly& num, const LaurentPoly& den) : num_(num), den_(den) {
  normalize();
}

void Scalar::normalize() {
  if (den_.is_zero()) throw DivisionByZero("scalar with zero denominator");
  if (num_.is_zero()) {
    den_ = LaurentPoly(1);
    return;
  }
  const std::int64_t u = num_.lo();
  const std::int64_t v = den_.lo();
  LaurentPoly n0 = num_.shifted(-u);
  LaurentPoly d0 = den_.shifted(-v);
  if (!d0.is_one()) {
    const LaurentPoly g = LaurentPoly::gcd(n0, d0);
    if (!g.is_one()) {
      n0 = LaurentPoly::div_exact(n0, g);
      d0 = LaurentPoly::div_exact(d0, g);
    }
    const Rational c0 = d0.coeff(0);
    assert(c0 != 0);
    if (c0 != 1) {
      const Rational inv = Rational(1) / c0;
      n0 = n0.scaled(inv);
      d0 = d0.scaled(inv);
    }
  }
  num_ = n0.shifted(u - v);
  den_ = d0;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

Scalar Scalar::operator+(const Scalar& other) const {
  if (den_ == other.den_) return Scalar(num_ + other.num_, den_);
  return Scalar(num_ * other.den_ + other.num_ * den_, den_ * other.den_);
}

Scalar Scalar::operator-(const Scalar& other) const { return *this + (-other); }

Scalar Scalar::operator*(const Scalar& other) const {
  if (is_zero() || other.is_zero()) return Scalar();
  return Scalar(num_ * other.num_, den_ * other.den_);
}

Scalar Scalar::operator/(const Scalar& other) const { return *this * other.inverse(); }

bool Scalar::operator==(const Scalar& other) const {
  return num_ == other.num_ && den_ == other.den_;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero scalar");
  return Scalar(den_, num_);
}

Scalar Scalar::pow(std::int64_t e) const {
  if (e == 0) return Scalar(1);
  if (e < 0) return inverse().pow(-e);
  Scalar base = *this;
  Scalar acc(1);
  std::int64_t k = e;
  while (k > 0) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

Scalar Scalar::bar() const { return Scalar(num_.bar(), den_.bar()); }

std::int64_t Scalar::val0() const {
  assert(!is_zero());
  return num_.lo();  // normal form: den(0) = 1
}

Rational Scalar::eval0() const {
  if (is_zero()) return Rational(0);
  if (val0() < 0) throw PoleAtZero("eval at q=0 of " + to_string());
  return val0() > 0 ? Rational(0) : num_.coeff(0);
}

std::string Scalar::to_string() const {
  if (den_.is_one()) return num_.to_string();
  const bool wrap_num = num_.term_count() > 1;
  const bool wrap_den = den_.term_count() > 1;
  std::string s;
  s += wrap_num ? "(" + num_.to_string() + ")" : num_.to_string();
  s += "/";
  s += wrap_den ? "(" + den_.to_string() + ")" : den_.to_string();
  return s;
}

std::size_t hash_of(const Scalar& s) { return std::hash<std::string>()(s.to_string()); }

// ---------------------------------------------------------------------------
// Expression parser: expr := term (('+'|'-') term)*, term := factor (('*'|'/')
// factor)*, factor := ('-')* atom ('^' int)?, atom := int | 'q' | '(' expr ')'.
// ---------------------------------------------------------------------------
namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  std::int64_t parse_int() {
    skip_ws();
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      neg = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected integer at position " + std::to_string(pos) + " in '" + text + "'");
    std::int64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      ++pos;
    }
    return neg ? -v : v;
  }

  Scalar parse_atom() {
    skip_ws();
    if (eat('(')) {
      Scalar s = parse_expr();
      if (!eat(')')) throw ParseError("missing ')' in '" + text + "'");
      return s;
    }
    const char c = peek();
    if (c == 'q') {
      ++pos;
      return Scalar::q();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      // Big integer literal via GMP string constructor.
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      Rational r(text.substr(start, pos - start));
      r.canonicalize();
      return Scalar(r);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' in '" + text + "'");
  }

  Scalar parse_factor() {
    skip_ws();
    bool neg = false;
    while (peek() == '-' || peek() == '+') {
      if (eat('-'))
        neg = !neg;
      else
        eat('+');
    }
    Scalar s = parse_atom();
    if (eat('^')) {
      const std::int64_t e = parse_int();
      s = s.pow(e);
    }
    return neg ? -s : s;
  }

  Scalar parse_term() {
    Scalar s = parse_factor();
    for (;;) {
      if (eat('*'))
        s *= parse_factor();
      else if (eat('/'))
        s /= parse_factor();
      else
        return s;
    }
  }

  Scalar parse_expr() {
    Scalar s = parse_term();
    for (;;) {
      skip_ws();
      if (eat('+'))
        s += parse_term();
      else if (peek() == '-')  // leave the '-' for the next factor's sign
        s += parse_term();
      else
        return s;
    }
  }
};

}  // namespace

Scalar parse_scalar(const std::string& text) {
  Parser p(text);
  Scalar s = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw ParseError("trailing characters at position " + std::to_string(p.pos) + " in '" + text + "'");
  return s;
}

// ---------------------------------------------------------------------------
// Quantum integers
// ---------------------------------------------------------------------------

Scalar qint(std::int64_t n, std::int64_t s) {
  if (n == 0) return Scalar(0);
  if (n < 0) return -qint(-n, s);
  LaurentPoly sum;
  for (std::int64_t k = 0; k < n; ++k) sum += LaurentPoly::q_power(s * (n - 1 - 2 * k));
  return Scalar(sum);
}

Scalar qfact(std::int64_t n, std::int64_t s) {
  assert(n >= 0);
  Scalar acc(1);
  for (std::int64_t k = 2; k <= n; ++k) acc *= qint(k, s);
  return acc;
}

Scalar qbinom(std::int64_t m, std::int64_t k, std::int64_t s) {
  assert(k >= 0 && m >= k);
  return qfact(m, s) / (qfact(k, s) * qfact(m - k, s));
}

}  // namespace qgkm
