#include "doctest.h"
#include "okamoto/numeric.hpp"

#include <random>

using namespace okamoto;

namespace {

FieldElement fe(const AlgebraicReal& q, const std::string& r) {
  return FieldElement::from_rational(q, parse_rational(r));
}

FieldElement random_element(const AlgebraicReal& q, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-9, 9);
  std::vector<Rational> c;
  for (int i = 0; i < q.degree(); ++i) c.emplace_back(d(rng), 1 + std::abs(d(rng)));
  return FieldElement::from_poly(q, Poly(c));
}

}  // namespace

TEST_CASE("algebraic_from_poly isolates the intended root") {
  auto g = algebraic_from_poly({-1, -1, 1}, 1, 2);
  auto iv = refine(g, Rational(1, 1000));
  CHECK(iv.lo > Rational(1617, 1000));
  CHECK(iv.hi < Rational(1619, 1000));

  auto q3 = algebraic_from_poly({-1, -1, -1, 1}, 1, 2);
  CHECK(q3.to_double() == doctest::Approx(1.83929).epsilon(1e-5));

  auto five = algebraic_from_poly({-5, 1}, 4, 6);
  CHECK(five.is_rational());
  CHECK(five.rational_value() == 5);
}

TEST_CASE("algebraic_from_poly rejects bad input") {
  auto kind_of = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return std::string("none");
  };
  CHECK(kind_of([] { algebraic_from_poly({-2, 0, 1}, 2, 3); }) == "NoRoot");
  CHECK(kind_of([] { algebraic_from_poly({-2, 0, 1}, -2, 2); }) == "MultipleRoots");
  CHECK(kind_of([] { algebraic_from_poly({1, -2, 1}, 0, 2); }) == "NonSquareFree");
}

TEST_CASE("root on an interval endpoint is moved inside") {
  // (x^2 - 2)(x - 1) vanishes at the left endpoint 1.
  auto a = algebraic_from_poly({2, -2, -1, 1}, 1, 2);
  CHECK(a.is_rational() == false);
  auto iv = a.interval();
  CHECK(iv.lo > 1);
  CHECK(a.to_double() == doctest::Approx(1.41421356).epsilon(1e-8));
}

TEST_CASE("refine shrinks monotonically and contains the number") {
  auto q9 = bonacci_number(9);
  auto a = refine(q9, Rational(1, 100000));
  CHECK(a.width() <= Rational(1, 100000));
  CHECK(a.lo < Rational(199804, 100000));
  CHECK(a.hi > Rational(199803, 100000));
  auto b = refine(q9, Rational(1, 10000000));
  CHECK(b.lo >= a.lo);
  CHECK(b.hi <= a.hi);

  auto r = refine(AlgebraicReal::rational(Rational(5, 3)), Rational(1, 10));
  CHECK(r.lo == Rational(5, 3));
  CHECK(r.hi == Rational(5, 3));
}

TEST_CASE("compare examples") {
  auto q9 = bonacci_number(9);
  auto q = FieldElement::generator(q9);
  CHECK(compare(fe(q9, "2") - q, q.pow(-9)) == Ordering::Equal);

  auto q3 = bonacci_number(3);
  auto p = FieldElement::generator(q3);
  CHECK(compare(p.pow(3), p * p + p + fe(q3, "1")) == Ordering::Equal);

  auto h = AlgebraicReal::rational(Rational(3, 2));
  auto x = FieldElement::generator(h);
  auto one = FieldElement::from_int(h, 1);
  CHECK(compare(one / x, one / (x * (x - one))) == Ordering::Less);
}

TEST_CASE("mixed fields are rejected") {
  auto a = FieldElement::generator(bonacci_number(3));
  auto b = FieldElement::generator(bonacci_number(4));
  CHECK_THROWS_AS(compare(a, b), Error);
  auto r = FieldElement::from_int(AlgebraicReal::rational(Rational(7, 4)), 2);
  CHECK(compare(a, r) == Ordering::Less);
}

TEST_CASE("k-Bonacci identity 2 - q_k = q_k^-k") {
  for (int k = 2; k <= 12; ++k) {
    auto base = bonacci_number(k);
    auto q = FieldElement::generator(base);
    CHECK(((fe(base, "2") - q) - q.pow(-k)).repr_is_zero());
  }
}

TEST_CASE("base inequalities on a rational grid above q_k") {
  for (int k : {2, 3, 5}) {
    auto qk = bonacci_number(k);
    auto lo = qk.refine(Rational(1, 1000000)).hi;
    for (int i = 1; i < 20; ++i) {
      Rational qr = lo + (2 - lo) * Rational(i, 20);
      auto base = AlgebraicReal::rational(qr);
      auto q = FieldElement::generator(base);
      auto two_minus = fe(base, "2") - q;
      CHECK(two_minus.sign() > 0);
      CHECK(two_minus < q.pow(-k));
      FieldElement s = q.pow(k);
      for (int j = 0; j < k; ++j) s -= q.pow(j);
      CHECK(s.sign() > 0);
      CHECK(s < fe(base, "1"));
    }
  }
}

TEST_CASE("property: trichotomy and antisymmetry") {
  std::mt19937 rng(7);
  auto base = bonacci_number(4);
  for (int i = 0; i < 200; ++i) {
    auto a = random_element(base, rng), b = random_element(base, rng);
    Ordering ab = compare(a, b), ba = compare(b, a);
    int n = (a < b) + (a == b) + (a > b);
    CHECK(n == 1);
    if (ab == Ordering::Less) CHECK(ba == Ordering::Greater);
    if (ab == Ordering::Equal) CHECK(ba == Ordering::Equal);
    if (ab == Ordering::Greater) CHECK(ba == Ordering::Less);
  }
}

TEST_CASE("property: ring laws and inverses") {
  std::mt19937 rng(11);
  auto base = bonacci_number(5);
  for (int i = 0; i < 100; ++i) {
    auto a = random_element(base, rng), b = random_element(base, rng), c = random_element(base, rng);
    CHECK(((a * b) * c).same_repr(a * (b * c)));
    CHECK((a * (b + c)).same_repr(a * b + a * c));
    CHECK((a + b).same_repr(b + a));
    if (!a.is_zero()) CHECK((a * a.inverse()).same_repr(FieldElement::from_int(base, 1)));
  }
}

TEST_CASE("reducible defining polynomial still gives exact signs") {
  // (x^2 - 2)(x - 3) with the root sqrt(2) isolated in (1, 2).
  auto a = algebraic_from_poly({6, -2, -3, 1}, 1, 2);
  auto x = FieldElement::generator(a);
  CHECK((x * x - Rational(2)).is_zero());
  CHECK((x * x - Rational(2)).repr_is_zero() == false);
  CHECK((x - Rational(3)).sign() < 0);
  CHECK_THROWS_AS((x * x - Rational(2)).inverse(), Error);
  auto y = (x + Rational(1)).inverse();
  CHECK((y * (x + Rational(1)) - Rational(1)).is_zero());
}

TEST_CASE("number literals") {
  CHECK(parse_rational("5/3") == Rational(5, 3));
  CHECK(parse_rational("1.999") == Rational(1999, 1000));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("2e-3") == Rational(1, 500));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(parse_number("bonacci:3").shares_cache(bonacci_number(3)));
  auto g = parse_number("algebraic:-1,-1,1:1:2");
  CHECK(g.compare(bonacci_number(2)) == Ordering::Equal);
  CHECK(parse_number(g.literal()).compare(g) == Ordering::Equal);
  CHECK(bonacci_number(3).literal() == "algebraic:-1,-1,-1,1:1:2");
}

TEST_CASE("decimal formatting rounds outward") {
  CHECK(decimal_floor(Rational(2, 3), 4) == "0.6666");
  CHECK(decimal_ceil(Rational(2, 3), 4) == "0.6667");
  CHECK(decimal_floor(Rational(-2, 3), 2) == "-0.67");
  CHECK(decimal_ceil(Rational(5), 2) == "5.00");
  CHECK(rational_str(Rational(6, 4)) == "3/2");
}

TEST_CASE("q_aleph0 matches its decimal value") {
  CHECK(q_aleph0().to_double() == doctest::Approx(1.64541).epsilon(1e-5));
}
