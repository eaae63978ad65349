#include "doctest.h"
#include "okamoto/slice.hpp"

#include <random>
#include <set>

using namespace okamoto;

namespace {

QContext rational_q(const std::string& s) { return QContext(AlgebraicReal::rational(parse_rational(s))); }

std::set<Word> as_set(const std::vector<Word>& v) { return {v.begin(), v.end()}; }

bool contains(const FieldInterval& iv, const FieldElement& v) { return iv.lo <= v && v <= iv.hi; }

}  // namespace

TEST_CASE("unique slice point at q = 5/3, y = 3/8") {
  QContext c = rational_q("5/3");
  SliceResult r = compute_slice(c, c.rational(Rational(3, 8)), 48);
  CHECK(r.claim.type == ClaimType::ExactlyN);
  CHECK(r.claim.n == 1);
  CHECK(r.claim.certified);
  REQUIRE(r.cylinders.size() == 1);
  REQUIRE(r.cylinders[0].x.has_value());
  CHECK(*r.cylinders[0].x == Rational(1, 4));
  CHECK(r.cylinders[0].itinerary->str() == "(02)*");
}

TEST_CASE("bottom and top edges") {
  for (const char* qs : {"3/2", "5/3", "19/10"}) {
    QContext c = rational_q(qs);
    SliceResult lo = compute_slice(c, c.zero, 20);
    CHECK(lo.claim.type == ClaimType::ExactlyN);
    CHECK(lo.claim.n == 1);
    CHECK(lo.claim.certified);
    CHECK(lo.cylinders[0].word == Word::repeat(Alphabet::Ternary, 0, 20));
    SliceResult hi = compute_slice(c, c.one, 20);
    CHECK(hi.claim.n == 1);
    CHECK(hi.claim.certified);
    CHECK(hi.cylinders[0].word == Word::repeat(Alphabet::Ternary, 2, 20));
    CHECK(*hi.cylinders[0].x == 1);
  }
}

TEST_CASE("three-point slice at the tribonacci base") {
  QContext c(bonacci_number(3));
  Tail t = parse_tail("1000(01)*");
  FieldElement y = (c.q - c.one) * project_q(c, t);
  SliceResult r = compute_slice(c, y, 48);
  DynSystem sys(SystemKind::Eq, c);
  std::size_t oracle = enumerate_orbits(sys, y * c.inv_qm1, 48).leaf_count();
  CHECK(oracle == 3);
  CHECK(r.claim.type == ClaimType::ExactlyN);
  CHECK(r.claim.n == 3);
  CHECK(r.claim.certified);
}

TEST_CASE("null-infinite slice never certifies finite") {
  QContext c(bonacci_number(3));
  FieldElement y = (c.q - c.one) * c.inv_q;
  std::size_t prev = 0;
  for (int d : {8, 16, 24, 32}) {
    CardinalityClaim cl = classify_cardinality(c, y, d);
    CHECK(cl.type == ClaimType::AtLeastN);
    CHECK(cl.n > prev);
    prev = cl.n;
  }
}

TEST_CASE("below the golden ratio the slice shows the doubling pattern") {
  QContext c = rational_q("3/2");
  CHECK(classify_cardinality(c, c.rational(Rational(1, 2)), 20).type ==
        ClaimType::UncountablePattern);
}

TEST_CASE("bad heights and depths") {
  QContext c = rational_q("3/2");
  CHECK_THROWS(compute_slice(c, c.rational(Rational(3, 2)), 10));
  CHECK_THROWS(compute_slice(c, c.zero, 0));
  CHECK(geometric_slice_oracle(c, c.rational(Rational(-1, 5)), 4).empty());
  CHECK(geometric_slice_oracle(c, c.rational(Rational(6, 5)), 4).empty());
}

TEST_CASE("closed boxes register both neighbours on a shared edge") {
  QContext c = rational_q("5/3");
  auto low = geometric_slice_oracle(c, c.zero, 6);
  CHECK(low == std::vector<Word>{Word::repeat(Alphabet::Ternary, 0, 6)});
  FieldElement edge = c.inv_q;
  auto raw = geometric_slice_oracle(c, edge, 6);
  auto kept = rte_filter(c, edge, raw);
  CHECK(raw.size() > kept.size());
  CHECK(as_set(kept) == as_set(compute_slice(c, edge, 6).words()));
}

TEST_CASE("oracle agrees with the dynamics on random rationals") {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<int> den(2, 40);
  int mismatches = 0;
  for (int trial = 0; trial < 30; ++trial) {
    int b = den(rng);
    int a = std::uniform_int_distribution<int>(1, b - 1)(rng);
    QContext c(AlgebraicReal::rational(1 + Rational(a, b)));
    int e = den(rng);
    FieldElement y = c.rational(Rational(std::uniform_int_distribution<int>(0, e)(rng), e));
    int d = 8;
    auto geo = rte_filter(c, y, geometric_slice_oracle(c, y, d));
    SliceOptions o;
    o.continuation = 0;
    if (as_set(geo) != as_set(compute_slice(c, y, d, o).words())) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("oracle on the edges of the switch region") {
  for (const char* qs : {"3/2", "5/3", "7/4"}) {
    QContext c = rational_q(qs);
    FieldElement q1 = c.q - c.one;
    for (const FieldElement& x : {c.inv_q, c.inv_q_qm1, c.one, c.inv_q * c.inv_q}) {
      FieldElement y = x * q1;
      if (y > c.one) continue;
      auto geo = rte_filter(c, y, geometric_slice_oracle(c, y, 9));
      CHECK(as_set(geo) == as_set(compute_slice(c, y, 9).words()));
    }
  }
}

TEST_CASE("leaf count matches the orbit tree") {
  QContext c = rational_q("7/4");
  DynSystem sys(SystemKind::Eq, c);
  for (int n = 0; n <= 10; ++n) {
    FieldElement y = c.rational(Rational(n, 10));
    CHECK(compute_slice(c, y, 10).cylinders.size() ==
          enumerate_orbits(sys, y * c.inv_qm1, 10).leaf_count());
  }
}

TEST_CASE("monotone refinement") {
  QContext c = rational_q("8/5");
  for (int n = 0; n <= 12; ++n) {
    FieldElement y = c.rational(Rational(n, 12));
    for (int d = 1; d < 9; ++d) {
      std::set<Word> cut;
      for (const auto& w : compute_slice(c, y, d + 1).words()) cut.insert(w.prefix(d));
      CHECK(cut == as_set(compute_slice(c, y, d).words()));
    }
  }
}

TEST_CASE("slice is symmetric under (x, y) -> (1-x, 1-y)") {
  QContext c = rational_q("5/3");
  SliceOptions o;
  o.max_nodes = 5000;
  o.continuation = 60;
  int compared = 0;
  for (int e = 2; e <= 14; ++e)
    for (int n = 0; n <= e; ++n) {
      Rational y(n, e);
      y.canonicalize();
      SliceResult a = compute_slice(c, c.rational(y), 24, o);
      SliceResult b = compute_slice(c, c.rational(1 - y), 24, o);
      if (a.claim.type != ClaimType::ExactlyN || !a.claim.certified) continue;
      if (b.claim.type != ClaimType::ExactlyN || !b.claim.certified) continue;
      std::set<Rational> xa, xb;
      for (const auto& cy : a.cylinders)
        if (cy.x) xa.insert(*cy.x);
      for (const auto& cy : b.cylinders)
        if (cy.x) xb.insert(1 - *cy.x);
      CHECK(xa == xb);
      ++compared;
    }
  CHECK(compared > 10);
}

TEST_CASE("graph evaluation") {
  QContext c = rational_q("5/3");
  auto one_third = eval_okamoto(c, Rational(1, 3), 30);
  CHECK(contains(one_third, c.rational(Rational(3, 5))));
  CHECK(contains(eval_okamoto(c, Rational(2, 3), 30), c.rational(Rational(2, 5))));
  CHECK(contains(eval_okamoto(c, Rational(0), 30), c.zero));
  CHECK(contains(eval_okamoto(c, Rational(1), 30), c.one));
  // Contraction of the vertical maps is max(1/q, |2/q - 1|) = 3/5.
  FieldElement bound = c.rational(Rational(3, 5)).pow(30);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Rational x(static_cast<long>(rng() % 1000), 999);
    x.canonicalize();
    auto iv = eval_okamoto(c, x, 30);
    CHECK(iv.hi - iv.lo <= bound);
  }
  CHECK_THROWS(eval_okamoto(c, Rational(3, 2), 4));
}

TEST_CASE("graph points lie on their slices") {
  QContext c = rational_q("5/3");
  for (long n = 0; n <= 26; ++n) {
    Rational x(n, 26);
    x.canonicalize();
    auto iv = eval_okamoto(c, x, 12);
    // The slice at the lower end of the enclosure passes through the depth-12 box above x.
    auto raw = geometric_slice_oracle(c, iv.lo, 12);
    bool found = false;
    for (const auto& w : raw) {
      Rational lo = project_ternary(w);
      Rational hi = lo + Rational(1, 531441);
      if (lo <= x && x <= hi) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("json shape") {
  QContext c = rational_q("5/3");
  Json j = compute_slice(c, c.rational(Rational(3, 8)), 12).to_json();
  CHECK(j["q"] == "5/3");
  CHECK(j["y"] == "3/8");
  CHECK(j["depth"] == 12);
  CHECK(j["cylinders"].size() == 1);
  CHECK(j["claim"]["type"] == "ExactlyN");
  CHECK(j["claim"]["n"] == 1);
}

TEST_CASE("IFS maps fix the corners") {
  QContext c = rational_q("7/5");
  auto [a0, b0] = u_map(c, 0);
  auto [a2, b2] = u_map(c, 2);
  auto [a1, b1] = u_map(c, 1);
  CHECK(b0 == c.zero);
  CHECK(a2 + b2 == c.one);
  // Consecutive boxes share corners: u0(1) = u1(0), u1(1) = u2(0).
  CHECK(a0 == b1);
  CHECK(a1 + b1 == b2);
}
