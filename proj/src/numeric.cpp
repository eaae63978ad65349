#include "okamoto/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace okamoto {

Error::Error(std::string kind, const std::string& message)
    : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
  }
  return "?";
}

namespace {

RationalInterval mul(const RationalInterval& a, const RationalInterval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  RationalInterval r{p1, p1};
  for (const Rational* p : {&p2, &p3, &p4}) {
    if (*p < r.lo) r.lo = *p;
    if (*p > r.hi) r.hi = *p;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::x() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }

void Poly::trim() {
  for (auto& v : c_) v.canonicalize();
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
  return c_[i];
}

Rational Poly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

RationalInterval Poly::eval(const RationalInterval& x) const {
  if (c_.empty()) return {Rational(0), Rational(0)};
  if (x.lo == x.hi) {
    Rational v = eval(x.lo);
    return {v, v};
  }
  RationalInterval acc{c_.back(), c_.back()};
  for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) {
    acc = mul(acc, x);
    acc.lo += c_[i];
    acc.hi += c_[i];
  }
  return acc;
}

Poly Poly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long>(i)));
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  return scaled(Rational(1) / c_.back());
}

Poly Poly::scaled(const Rational& s) const {
  std::vector<Rational> r(c_);
  for (auto& v : r) v *= s;
  return Poly(std::move(r));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.c_.size()) r[i] += a.c_[i];
    if (i < b.c_.size()) r[i] += b.c_[i];
  }
  return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.c_.size()) r[i] += a.c_[i];
    if (i < b.c_.size()) r[i] -= b.c_[i];
  }
  return Poly(std::move(r));
}

Poly Poly::operator-() const { return scaled(Rational(-1)); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c_.empty() || b.c_.empty()) return Poly();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(r));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem) {
  if (b.is_zero()) throw Error("DivisionByZero", "polynomial division by zero");
  std::vector<Rational> r = a.c_;
  int db = b.degree();
  int da = a.degree();
  std::vector<Rational> q(da >= db ? da - db + 1 : 0);
  Rational inv_lead = Rational(1) / b.c_.back();
  for (int i = da; i >= db; --i) {
    if (r[i] == 0) continue;
    Rational f = r[i] * inv_lead;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.c_[j];
  }
  r.resize(std::max(0, std::min<int>(static_cast<int>(r.size()), db)));
  quot = Poly(std::move(q));
  rem = Poly(std::move(r));
}

Poly operator%(const Poly& a, const Poly& b) {
  if (a.degree() < b.degree()) return a;
  Poly q, r;
  Poly::divmod(a, b, q, r);
  return r;
}

Poly operator/(const Poly& a, const Poly& b) {
  Poly q, r;
  Poly::divmod(a, b, q, r);
  return q;
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

Poly Poly::ext_gcd(const Poly& a, const Poly& b, Poly& s, Poly& t) {
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(1), s1;
  Poly t0, t1 = Poly::constant(1);
  while (!r1.is_zero()) {
    Poly q, r;
    divmod(r0, r1, q, r);
    Poly s2 = s0 - q * s1;
    Poly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) {
    s = Poly();
    t = Poly();
    return r0;
  }
  Rational inv = Rational(1) / r0.leading();
  s = s0.scaled(inv);
  t = t0.scaled(inv);
  return r0.scaled(inv);
}

std::string Poly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << rational_str(c_[i]);
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

namespace {

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    Poly r = chain[chain.size() - 2] % chain.back();
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return chain;
}

int variations(const std::vector<Poly>& chain, const Rational& x) {
  int v = 0;
  int last = 0;
  for (const auto& p : chain) {
    int s = sgn(p.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace

int count_roots_open(const Poly& p, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) return 0;
  auto chain = sturm_chain(p);
  int n = variations(chain, lo) - variations(chain, hi);
  if (p.eval(hi) == 0) --n;
  return n;
}

// ---------------------------------------------------------------- AlgebraicReal

struct AlgebraicReal::Impl {
  bool rational = true;
  Rational value;
  Poly poly;
  std::vector<Integer> int_coeffs;
  Rational orig_lo, orig_hi;
  std::string label;

  mutable std::mutex mu;
  mutable Rational lo, hi;
  int sign_lo = 0;
};

AlgebraicReal::AlgebraicReal() : AlgebraicReal(rational(Rational(0))) {}

AlgebraicReal AlgebraicReal::rational(const Rational& r) {
  auto impl = std::make_shared<Impl>();
  impl->rational = true;
  impl->value = r;
  impl->value.canonicalize();
  impl->poly = Poly(std::vector<Rational>{-impl->value, Rational(1)});
  impl->lo = impl->hi = impl->value;
  return AlgebraicReal(impl);
}

AlgebraicReal AlgebraicReal::from_poly(const std::vector<Integer>& coeffs, const Rational& lo,
                                       const Rational& hi) {
  std::vector<Rational> rc;
  for (const auto& c : coeffs) rc.emplace_back(c);
  Poly p(rc);
  if (p.degree() < 1) throw Error("NoRoot", "polynomial has no roots");
  if (!(lo < hi)) throw Error("NoRoot", "empty isolating interval");
  Poly g = Poly::gcd(p, p.derivative());
  if (g.degree() >= 1) throw Error("NonSquareFree", "gcd(p, p') = " + g.str());
  Poly m = p.monic();
  int n = count_roots_open(m, lo, hi);
  if (n == 0) throw Error("NoRoot", "no root in the open interval");
  if (n > 1) throw Error("MultipleRoots", std::to_string(n) + " roots in the open interval");
  if (m.degree() == 1) return rational(-m.coeff(0));

  auto impl = std::make_shared<Impl>();
  impl->rational = false;
  impl->poly = m;
  impl->int_coeffs = coeffs;
  impl->orig_lo = lo;
  impl->orig_hi = hi;
  Rational a = lo, b = hi;
  // Move endpoints off roots so that a sign change brackets the root.
  while (m.eval(a) == 0 || m.eval(b) == 0) {
    Rational mid = (a + b) / 2;
    if (m.eval(mid) == 0) return rational(mid);
    if (count_roots_open(m, a, mid) == 1)
      b = mid;
    else
      a = mid;
  }
  impl->lo = a;
  impl->hi = b;
  impl->sign_lo = sgn(m.eval(a));
  return AlgebraicReal(impl);
}

bool AlgebraicReal::is_rational() const { return impl_->rational; }

const Rational& AlgebraicReal::rational_value() const {
  if (!impl_->rational) throw Error("NotRational", "algebraic number is not rational");
  return impl_->value;
}

const Poly& AlgebraicReal::poly() const { return impl_->poly; }

RationalInterval AlgebraicReal::interval() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return {impl_->lo, impl_->hi};
}

void AlgebraicReal::bisect_once() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (impl_->lo == impl_->hi) return;
  Rational mid = (impl_->lo + impl_->hi) / 2;
  int s = sgn(impl_->poly.eval(mid));
  if (s == 0) {
    impl_->lo = impl_->hi = mid;
  } else if (s == impl_->sign_lo) {
    impl_->lo = mid;
  } else {
    impl_->hi = mid;
  }
}

RationalInterval AlgebraicReal::refine(const Rational& eps) const {
  if (impl_->rational) return {impl_->value, impl_->value};
  for (;;) {
    RationalInterval iv = interval();
    if (iv.width() <= eps) return iv;
    bisect_once();
  }
}

RationalInterval AlgebraicReal::eval_on_current(const Poly& r) const { return r.eval(interval()); }

int AlgebraicReal::sign_of(const Poly& r_in) const {
  if (r_in.is_zero()) return 0;
  if (impl_->rational) return sgn(r_in.eval(impl_->value));
  Poly r = r_in.degree() >= impl_->poly.degree() ? r_in % impl_->poly : r_in;
  if (r.is_zero()) return 0;
  if (r.degree() == 0) return sgn(r.coeff(0));
  bool zero_checked = false;
  for (int round = 0; round < 200000; ++round) {
    RationalInterval iv = interval();
    if (iv.lo == iv.hi) return sgn(r.eval(iv.lo));
    RationalInterval e = r.eval(iv);
    if (e.lo > 0) return 1;
    if (e.hi < 0) return -1;
    if (!zero_checked) {
      zero_checked = true;
      Poly g = Poly::gcd(r, impl_->poly);
      if (g.degree() >= 1) {
        int a = sgn(g.eval(iv.lo)), b = sgn(g.eval(iv.hi));
        if (a * b < 0) return 0;
      }
    }
    for (int i = 0; i < 4; ++i) bisect_once();
  }
  throw Error("RefinementFailure", "sign evaluation did not terminate");
}

Ordering AlgebraicReal::compare(const AlgebraicReal& other) const {
  if (impl_ == other.impl_) return Ordering::Equal;
  auto from_sign = [](int s) {
    return s < 0 ? Ordering::Less : (s > 0 ? Ordering::Greater : Ordering::Equal);
  };
  if (impl_->rational && other.impl_->rational) return from_sign(cmp(impl_->value, other.impl_->value));
  if (other.impl_->rational) {
    Poly d(std::vector<Rational>{-other.impl_->value, Rational(1)});
    return from_sign(sign_of(d));
  }
  if (impl_->rational) {
    Poly d(std::vector<Rational>{-impl_->value, Rational(1)});
    return from_sign(-other.sign_of(d));
  }
  Poly g = Poly::gcd(impl_->poly, other.impl_->poly);
  bool may_equal = g.degree() >= 1;
  for (int round = 0; round < 100000; ++round) {
    RationalInterval a = interval(), b = other.interval();
    if (a.hi < b.lo) return Ordering::Less;
    if (b.hi < a.lo) return Ordering::Greater;
    if (may_equal) {
      // A common root inside the overlap is the isolated root of both.
      Rational lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
      if (g.eval(lo) == 0 || g.eval(hi) == 0 || count_roots_open(g, lo, hi) >= 1)
        return Ordering::Equal;
      may_equal = false;
    }
    for (int i = 0; i < 4; ++i) {
      bisect_once();
      other.bisect_once();
    }
  }
  throw Error("RefinementFailure", "comparison did not terminate");
}

bool AlgebraicReal::same_number(const AlgebraicReal& other) const {
  return compare(other) == Ordering::Equal;
}

double AlgebraicReal::to_double() const {
  if (impl_->rational) return impl_->value.get_d();
  RationalInterval iv = refine(Rational(1, 1) / Rational(Integer(1) << 70));
  Rational mid = (iv.lo + iv.hi) / 2;
  return mid.get_d();
}

std::string AlgebraicReal::literal() const {
  if (impl_->rational) return rational_str(impl_->value);
  if (!impl_->label.empty()) return impl_->label;
  std::ostringstream os;
  os << "algebraic:";
  for (std::size_t i = 0; i < impl_->int_coeffs.size(); ++i) {
    if (i) os << ",";
    os << impl_->int_coeffs[i].get_str();
  }
  os << ":" << rational_str(impl_->orig_lo) << ":" << rational_str(impl_->orig_hi);
  return os.str();
}

AlgebraicReal algebraic_from_poly(const std::vector<Integer>& coeffs, const Rational& lo,
                                  const Rational& hi) {
  return AlgebraicReal::from_poly(coeffs, lo, hi);
}

RationalInterval refine(const AlgebraicReal& a, const Rational& eps) { return a.refine(eps); }

// ---------------------------------------------------------------- FieldElement

FieldElement::FieldElement() : base_(), c_() {}

FieldElement::FieldElement(AlgebraicReal base, std::vector<Rational> c)
    : base_(std::move(base)), c_(std::move(c)) {
  for (auto& v : c_) v.canonicalize();
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::vector<Rational> FieldElement::reduce(const AlgebraicReal& base, Poly p) {
  if (base.is_rational()) {
    Rational v = p.eval(base.rational_value());
    if (v == 0) return {};
    return {v};
  }
  if (p.degree() >= base.poly().degree()) p = p % base.poly();
  return p.coeffs();
}

FieldElement FieldElement::from_rational(const AlgebraicReal& base, const Rational& r) {
  std::vector<Rational> c;
  if (r != 0) c.push_back(r);
  return FieldElement(base, std::move(c));
}

FieldElement FieldElement::from_int(const AlgebraicReal& base, long v) {
  return from_rational(base, Rational(v));
}

FieldElement FieldElement::generator(const AlgebraicReal& base) {
  return FieldElement(base, reduce(base, Poly::x()));
}

FieldElement FieldElement::from_poly(const AlgebraicReal& base, const Poly& p) {
  return FieldElement(base, reduce(base, p));
}

void FieldElement::check_same(const FieldElement& o) const {
  if (base_.shares_cache(o.base_)) return;
  if (base_.is_rational() || o.base_.is_rational()) return;
  if (!base_.same_number(o.base_)) throw Error("MixedField", "elements over different bases");
}

namespace {
// Pick the operand base that carries the larger field.
const AlgebraicReal& join_base(const AlgebraicReal& a, const AlgebraicReal& b) {
  if (!a.is_rational()) return a;
  return b;
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(o);
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < c_.size()) r[i] += c_[i];
    if (i < o.c_.size()) r[i] += o.c_[i];
  }
  return FieldElement(join_base(base_, o.base_), std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(o);
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < c_.size()) r[i] += c_[i];
    if (i < o.c_.size()) r[i] -= o.c_[i];
  }
  return FieldElement(join_base(base_, o.base_), std::move(r));
}

FieldElement FieldElement::operator-() const {
  std::vector<Rational> r(c_);
  for (auto& v : r) v = -v;
  return FieldElement(base_, std::move(r));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  const AlgebraicReal& b = join_base(base_, o.base_);
  if (c_.empty() || o.c_.empty()) return FieldElement(b, {});
  if (c_.size() == 1 && o.c_.size() == 1) return FieldElement(b, {c_[0] * o.c_[0]});
  if (c_.size() == 1) {
    std::vector<Rational> r(o.c_);
    for (auto& v : r) v *= c_[0];
    return FieldElement(b, std::move(r));
  }
  if (o.c_.size() == 1) {
    std::vector<Rational> r(c_);
    for (auto& v : r) v *= o.c_[0];
    return FieldElement(b, std::move(r));
  }
  return FieldElement(b, reduce(b, Poly(c_) * Poly(o.c_)));
}

FieldElement FieldElement::operator*(const Rational& r) const {
  std::vector<Rational> c(c_);
  for (auto& v : c) v *= r;
  return FieldElement(base_, std::move(c));
}

FieldElement FieldElement::operator+(const Rational& r) const {
  std::vector<Rational> c(c_);
  if (c.empty()) c.emplace_back(0);
  c[0] += r;
  return FieldElement(base_, std::move(c));
}

FieldElement FieldElement::operator-(const Rational& r) const { return *this + Rational(-r); }

FieldElement FieldElement::inverse() const {
  if (c_.empty()) throw Error("DivisionByZero", "inverse of zero");
  if (c_.size() == 1) return FieldElement(base_, {Rational(1) / c_[0]});
  const Poly& p = base_.poly();
  Poly r(c_);
  Poly s, t;
  Poly g = Poly::ext_gcd(r, p, s, t);
  if (g.degree() >= 1) {
    if (base_.sign_of(g) == 0) throw Error("DivisionByZero", "element vanishes at the base");
    Poly h = p / g;
    g = Poly::ext_gcd(r, h, s, t);
  }
  return FieldElement(base_, reduce(base_, s.scaled(Rational(1) / g.coeff(0))));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(o);
  return *this * o.inverse();
}

FieldElement FieldElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FieldElement result = from_int(base_, 1);
  FieldElement b = *this;
  while (n > 0) {
    if (n & 1) result = result * b;
    b = b * b;
    n >>= 1;
  }
  return result;
}

int FieldElement::sign() const {
  if (c_.empty()) return 0;
  if (c_.size() == 1) return sgn(c_[0]);
  return base_.sign_of(Poly(c_));
}

Rational FieldElement::rational_value() const {
  if (c_.empty()) return Rational(0);
  if (c_.size() == 1) return c_[0];
  throw Error("NotRational", "field element is not rational");
}

Ordering FieldElement::compare(const FieldElement& o) const {
  int s = (*this - o).sign();
  return s < 0 ? Ordering::Less : (s > 0 ? Ordering::Greater : Ordering::Equal);
}

Ordering compare(const FieldElement& a, const FieldElement& b) { return a.compare(b); }

std::size_t FieldElement::repr_hash() const {
  std::size_t h = c_.size();
  for (const auto& v : c_) {
    std::size_t n = mpz_getlimbn(v.get_num_mpz_t(), 0);
    std::size_t d = mpz_getlimbn(v.get_den_mpz_t(), 0);
    h = h * 1000003u ^ (n * 31u + d);
  }
  return h;
}

RationalInterval FieldElement::enclosure(const Rational& eps) const {
  if (c_.size() <= 1) {
    Rational v = c_.empty() ? Rational(0) : c_[0];
    return {v, v};
  }
  Poly p(c_);
  for (int round = 0; round < 10000; ++round) {
    RationalInterval e = p.eval(base_.interval());
    if (e.width() <= eps) return e;
    base_.refine(base_.interval().width() / 16);
  }
  throw Error("RefinementFailure", "enclosure did not converge");
}

double FieldElement::to_double() const {
  RationalInterval e = enclosure(Rational(1) / Rational(Integer(1) << 60));
  Rational mid = (e.lo + e.hi) / 2;
  return mid.get_d();
}

std::string FieldElement::str() const {
  if (c_.size() <= 1) return rational_str(c_.empty() ? Rational(0) : c_[0]);
  return Poly(c_).str("q");
}

// ---------------------------------------------------------------- constants

AlgebraicReal bonacci_number(int k) {
  if (k < 2) throw Error("InputError", "k-Bonacci needs k >= 2");
  static std::mutex mu;
  static std::map<int, AlgebraicReal> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<Integer> c(k + 1, Integer(-1));
  c[k] = 1;
  AlgebraicReal a = AlgebraicReal::from_poly(c, Rational(1), Rational(2));
  cache.emplace(k, a);
  return a;
}

AlgebraicReal q_aleph0() {
  static AlgebraicReal a = AlgebraicReal::from_poly(
      {Integer(-1), Integer(-1), Integer(-2), Integer(-1), Integer(-1), Integer(0), Integer(1)},
      Rational(16, 10), Rational(17, 10));
  return a;
}

Rational q_kl_approx() { return Rational(178723, 100000); }

// ---------------------------------------------------------------- literals

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Integer parse_integer(const std::string& text) {
  std::string s = trim(text);
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (!all_digits(s)) throw Error("InputError", "not an integer: '" + text + "'");
  Integer v(s, 10);
  return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw Error("InputError", "empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer p = parse_integer(s.substr(0, slash));
    Integer q = parse_integer(s.substr(slash + 1));
    if (q == 0) throw Error("InputError", "zero denominator in '" + text + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '-' || s[i] == '+') {
    neg = s[i] == '-';
    ++i;
  }
  std::string mant = s.substr(i);
  long exp10 = 0;
  auto epos = mant.find_first_of("eE");
  if (epos != std::string::npos) {
    Integer e = parse_integer(mant.substr(epos + 1));
    if (!e.fits_slong_p() || abs(e) > 100000) throw Error("InputError", "exponent out of range");
    exp10 = e.get_si();
    mant = mant.substr(0, epos);
  }
  std::string ip = mant, fp;
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    ip = mant.substr(0, dot);
    fp = mant.substr(dot + 1);
  }
  if (ip.empty() && fp.empty()) throw Error("InputError", "not a number: '" + text + "'");
  if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
    throw Error("InputError", "not a number: '" + text + "'");
  Integer num((ip.empty() ? std::string("0") : ip) + fp, 10);
  exp10 -= static_cast<long>(fp.size());
  Integer ten = 10;
  Integer scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

AlgebraicReal parse_number(const std::string& text) {
  std::string s = trim(text);
  if (s.rfind("bonacci:", 0) == 0) {
    Integer k = parse_integer(s.substr(8));
    if (k < 2 || k > 64) throw Error("InputError", "bonacci index must be in 2..64");
    return bonacci_number(static_cast<int>(k.get_si()));
  }
  if (s.rfind("algebraic:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(s.substr(10));
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw Error("InputError", "expected algebraic:c0,...,cn:lo:hi");
    std::vector<Integer> coeffs;
    std::stringstream cs(parts[0]);
    while (std::getline(cs, part, ',')) coeffs.push_back(parse_integer(part));
    return AlgebraicReal::from_poly(coeffs, parse_rational(parts[1]), parse_rational(parts[2]));
  }
  return AlgebraicReal::rational(parse_rational(s));
}

namespace {

std::string format_scaled(const Integer& n, int digits) {
  Integer a = abs(n);
  std::string s = a.get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
    s.insert(s.size() - digits, ".");
  }
  return (n < 0 ? "-" : "") + s;
}

Integer pow10(int d) {
  Integer r;
  Integer ten = 10;
  mpz_pow_ui(r.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(d));
  return r;
}

}  // namespace

std::string decimal_floor(const Rational& r, int digits) {
  Rational scaled = r * Rational(pow10(digits));
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return format_scaled(f, digits);
}

std::string decimal_ceil(const Rational& r, int digits) {
  Rational scaled = r * Rational(pow10(digits));
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return format_scaled(c, digits);
}

std::string rational_str(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace okamoto
