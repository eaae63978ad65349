#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace okamoto {

using Integer = mpz_class;
using Rational = mpq_class;

// Error carrying a machine-readable kind, e.g. "NoRoot" or "OutOfDomain".
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message);
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

enum class Ordering { Less, Equal, Greater };

const char* to_string(Ordering o);

struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

// Dense polynomial over Q, coefficient i multiplies x^i.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);

  static Poly constant(const Rational& c);
  static Poly x();

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  const Rational& leading() const { return c_.back(); }

  Rational eval(const Rational& x) const;
  RationalInterval eval(const RationalInterval& x) const;
  Poly derivative() const;
  Poly monic() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly scaled(const Rational& s) const;

  static void divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem);
  friend Poly operator%(const Poly& a, const Poly& b);
  friend Poly operator/(const Poly& a, const Poly& b);

  // Monic gcd (zero if both are zero).
  static Poly gcd(Poly a, Poly b);
  // Returns monic g with s*a + t*b = g.
  static Poly ext_gcd(const Poly& a, const Poly& b, Poly& s, Poly& t);

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  std::string str(const std::string& var = "x") const;

 private:
  std::vector<Rational> c_;
  void trim();
};

// Number of distinct real roots of a square-free p in the open interval (lo, hi).
int count_roots_open(const Poly& p, const Rational& lo, const Rational& hi);

// Exact real number: a rational, or the unique root of a square-free
// polynomial inside an isolating interval. Copies share the refinement cache.
class AlgebraicReal {
 public:
  AlgebraicReal();  // the rational 0

  static AlgebraicReal rational(const Rational& r);
  // coeffs[i] multiplies x^i.
  static AlgebraicReal from_poly(const std::vector<Integer>& coeffs, const Rational& lo,
                                 const Rational& hi);

  bool is_rational() const;
  const Rational& rational_value() const;
  // Monic defining polynomial; x - r for rationals.
  const Poly& poly() const;
  int degree() const { return poly().degree(); }

  RationalInterval interval() const;
  RationalInterval refine(const Rational& eps) const;

  // Exact sign of r evaluated at this number.
  int sign_of(const Poly& r) const;

  Ordering compare(const AlgebraicReal& other) const;
  bool same_number(const AlgebraicReal& other) const;
  bool shares_cache(const AlgebraicReal& other) const { return impl_ == other.impl_; }

  double to_double() const;
  // Literal form accepted by parse_number.
  std::string literal() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  explicit AlgebraicReal(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  void bisect_once() const;
  RationalInterval eval_on_current(const Poly& r) const;
};

// Element of Q(base), stored as a polynomial in the base reduced modulo its
// defining polynomial.
class FieldElement {
 public:
  FieldElement();  // 0 over the rational field Q
  static FieldElement from_rational(const AlgebraicReal& base, const Rational& r);
  static FieldElement from_int(const AlgebraicReal& base, long v);
  static FieldElement generator(const AlgebraicReal& base);
  static FieldElement from_poly(const AlgebraicReal& base, const Poly& p);

  const AlgebraicReal& base() const { return base_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Poly as_poly() const { return Poly(c_); }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement operator*(const Rational& r) const;
  FieldElement operator+(const Rational& r) const;
  FieldElement operator-(const Rational& r) const;
  FieldElement inverse() const;
  FieldElement pow(long n) const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool repr_is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }
  Rational rational_value() const;  // only when is_rational()

  Ordering compare(const FieldElement& o) const;
  bool operator<(const FieldElement& o) const { return compare(o) == Ordering::Less; }
  bool operator<=(const FieldElement& o) const { return compare(o) != Ordering::Greater; }
  bool operator>(const FieldElement& o) const { return compare(o) == Ordering::Greater; }
  bool operator>=(const FieldElement& o) const { return compare(o) != Ordering::Less; }
  bool operator==(const FieldElement& o) const { return compare(o) == Ordering::Equal; }
  bool operator!=(const FieldElement& o) const { return compare(o) != Ordering::Equal; }

  // Identical reduced representatives (implies equal values).
  bool same_repr(const FieldElement& o) const { return c_ == o.c_; }
  std::size_t repr_hash() const;

  RationalInterval enclosure(const Rational& eps) const;
  double to_double() const;
  std::string str() const;

 private:
  AlgebraicReal base_;
  std::vector<Rational> c_;
  FieldElement(AlgebraicReal base, std::vector<Rational> c);
  void check_same(const FieldElement& o) const;
  static std::vector<Rational> reduce(const AlgebraicReal& base, Poly p);
};

Ordering compare(const FieldElement& a, const FieldElement& b);

struct FieldElementHash {
  std::size_t operator()(const FieldElement& e) const { return e.repr_hash(); }
};
struct FieldElementReprEq {
  bool operator()(const FieldElement& a, const FieldElement& b) const { return a.same_repr(b); }
};

AlgebraicReal algebraic_from_poly(const std::vector<Integer>& coeffs, const Rational& lo,
                                  const Rational& hi);
RationalInterval refine(const AlgebraicReal& a, const Rational& eps);

// Root of q^k - q^(k-1) - ... - q - 1 in (1,2), k >= 2.
AlgebraicReal bonacci_number(int k);
// Root of x^6 = x^4 + x^3 + 2x^2 + x + 1 in (1,2).
AlgebraicReal q_aleph0();
// Decimal approximation only; the constant is transcendental.
Rational q_kl_approx();

// Number literals: p/q, decimal, bonacci:k, algebraic:c0,...,cn:lo:hi.
Rational parse_rational(const std::string& text);
AlgebraicReal parse_number(const std::string& text);

// Outward-rounded decimal strings with the given number of fractional digits.
std::string decimal_floor(const Rational& r, int digits);
std::string decimal_ceil(const Rational& r, int digits);
std::string rational_str(const Rational& r);

}  // namespace okamoto
