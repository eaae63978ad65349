#include "doctest.h"
#include "okamoto/dimension.hpp"

#include <cmath>

using namespace okamoto;

namespace {

FieldElement midpoint_J(const QContext& ctx) { return (ctx.inv_q + ctx.inv_q_qm1) * Rational(1, 2); }

bool strictly_inside_J(const QContext& ctx, const FieldElement& y) {
  return ctx.inv_q < y && y < ctx.inv_q_qm1;
}

// Independent re-check of a pair at a point through follow().
void check_pair_at(const QContext& ctx, const FieldElement& x, const Word& b0, const Word& b1) {
  DynSystem sys(SystemKind::Eq, ctx);
  CHECK_FALSE(b0.starts_with(b1));
  CHECK_FALSE(b1.starts_with(b0));
  auto y0 = follow(sys, x, b0), y1 = follow(sys, x, b1);
  REQUIRE(y0);
  REQUIRE(y1);
  CHECK(strictly_inside_J(ctx, *y0));
  CHECK(strictly_inside_J(ctx, *y1));
}

}  // namespace

TEST_CASE("branching pair at the midpoint of J_q") {
  SUBCASE("q3") {
    QContext ctx(bonacci_number(3));
    FieldElement x = midpoint_J(ctx);
    BranchingPair p = branching_pair_search(ctx, x, 12);
    CHECK(p.max_length() <= 8);
    check_pair_at(ctx, x, p.b0, p.b1);
    REQUIRE(p.further.size() == 2);
    check_pair_at(ctx, p.y0.lo, p.further[0].b0, p.further[0].b1);
    check_pair_at(ctx, p.y1.lo, p.further[1].b0, p.further[1].b1);
    REQUIRE(p.further[0].further.size() == 2);
    CHECK(p.to_json()["certification"] == "depth-bounded");
  }
  SUBCASE("q = 3/2") {
    QContext ctx(parse_number("3/2"));
    FieldElement x = midpoint_J(ctx);
    BranchingPair p = branching_pair_search(ctx, x, 12);
    CHECK(p.max_length() <= 3);
    check_pair_at(ctx, x, p.b0, p.b1);
  }
  SUBCASE("shortlex minimality against brute force") {
    QContext ctx(parse_number("3/2"));
    DynSystem sys(SystemKind::Eq, ctx);
    FieldElement x = midpoint_J(ctx);
    BranchingPair p = branching_pair_search(ctx, x, 12, 0);
    // every pair of words shorter than the found maximum fails
    std::vector<Word> all{Word(Alphabet::Ternary)};
    std::vector<Word> landing;
    for (int len = 1; len < p.max_length(); ++len) {
      std::vector<Word> next;
      for (const Word& w : all)
        for (int s = 0; s < 3; ++s) {
          Word v = w;
          v.push_back(s);
          next.push_back(v);
          auto y = follow(sys, x, v);
          if (y && strictly_inside_J(ctx, *y)) landing.push_back(v);
        }
      all = next;
    }
    for (const Word& a : landing)
      for (const Word& b : landing) CHECK((a.starts_with(b) || b.starts_with(a)));
  }
  SUBCASE("outside J_q") {
    QContext ctx(parse_number("3/2"));
    try {
      branching_pair_search(ctx, ctx.rational(Rational(1, 10)), 8);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == "InputError");
    }
  }
  SUBCASE("endpoint 1/q") {
    QContext ctx(parse_number("3/2"));
    BranchingPair p = branching_pair_search(ctx, ctx.inv_q, 12);
    check_pair_at(ctx, ctx.inv_q, p.b0, p.b1);
  }
  SUBCASE("tiny budget") {
    QContext ctx(bonacci_number(3));
    try {
      branching_pair_search(ctx, midpoint_J(ctx), 1);
      FAIL("expected NotFound");
    } catch (const Error& e) {
      CHECK(e.kind() == "NotFound");
    }
  }
}

TEST_CASE("M from a verified cover of J_q") {
  for (std::string lit : {"3/2", "13/10"}) {
    CAPTURE(lit);
    QContext ctx(parse_number(lit));
    MEstimate m = estimate_M(ctx, 64, 12, 6, 2);
    REQUIRE(m.M.has_value());
    CHECK(*m.M >= 1);
    MESSAGE(lit << " M = " << *m.M << " cells = " << m.cells);
    // cells tile J_q and every point tried inside a cell is handled by its pair
    CHECK(m.cover.front().first.lo == ctx.inv_q);
    CHECK(m.cover.back().first.hi == ctx.inv_q_qm1);
    for (std::size_t i = 0; i + 1 < m.cover.size(); ++i)
      CHECK(m.cover[i].first.hi == m.cover[i + 1].first.lo);
    for (const auto& [cell, pair] : m.cover) {
      CHECK(pair.max_length() <= *m.M);
      for (Rational t : {Rational(0), Rational(1, 3), Rational(1)}) {
        FieldElement x = cell.lo + (cell.hi - cell.lo) * t;
        check_pair_at(ctx, x, pair.b0, pair.b1);
      }
    }
  }
  SUBCASE("worker count does not change the result") {
    QContext ctx(parse_number("3/2"));
    MEstimate a = estimate_M(ctx, 32, 12, 6, 1), b = estimate_M(ctx, 32, 12, 6, 4);
    CHECK(a.to_json() == b.to_json());
    REQUIRE(a.cover.size() == b.cover.size());
    for (std::size_t i = 0; i < a.cover.size(); ++i) {
      CHECK(a.cover[i].second.b0 == b.cover[i].second.b0);
      CHECK(a.cover[i].second.b1 == b.cover[i].second.b1);
    }
  }
  SUBCASE("algebraic base across workers") {
    QContext ctx(bonacci_number(3));
    MEstimate m = estimate_M(ctx, 16, 12, 6, 3);
    if (m.M) MESSAGE("q3 M = " << *m.M);
    else MESSAGE("q3 M unknown");
  }
  SUBCASE("q near 2 is reported honestly") {
    QContext ctx(parse_number("199/100"));
    MEstimate m = estimate_M(ctx, 16, 6, 2, 2);
    if (!m.M) CHECK(m.failed_cell.has_value());
    CHECK(m.to_json().contains("M"));
  }
}

TEST_CASE("dimension formulas") {
  CHECK(dimension_lower_bound(1) == doctest::Approx(0.6309297535714574).epsilon(1e-12));
  CHECK(dimension_lower_bound(4) == doctest::Approx(0.15773243839286435).epsilon(1e-12));
  for (int M = 1; M < 50; ++M) CHECK(dimension_lower_bound(M + 1) < dimension_lower_bound(M));
  CHECK_THROWS_AS(dimension_lower_bound(0), Error);

  CHECK(affinity_dimension(parse_number("5/3")) == doctest::Approx(1.306270228443495).epsilon(1e-9));
  CHECK(affinity_dimension(parse_number("1000001/1000000")) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(affinity_dimension(parse_number("1999999/1000000")) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(affinity_dimension(parse_number("2")), Error);

  Json j = real_json(dimension_lower_bound(3));
  CHECK(Rational(parse_rational(j[0].get<std::string>())) <= Rational(dimension_lower_bound(3)));
  CHECK(Rational(dimension_lower_bound(3)) <= Rational(parse_rational(j[1].get<std::string>())));
}

TEST_CASE("R tree and its measure") {
  QContext ctx(parse_number("3/2"));
  FieldElement x = midpoint_J(ctx);
  RTree t0 = build_r_tree(ctx, x, 0);
  CHECK(t0.level_words(0).size() == 1);
  CHECK(t0.level_words(0)[0].empty());
  CHECK(t0.mass(0) == 1);

  MEstimate m = estimate_M(ctx, 64, 12, 6, 2);
  REQUIRE(m.M);
  RTree t = build_r_tree(ctx, x, 6);
  for (int k = 0; k <= 6; ++k) {
    CHECK(t.level_words(k).size() == (std::size_t(1) << k));
    CHECK(t.mass(k) == 1);
  }
  RTreeReport r = check_r_tree(ctx, t, *m.M);
  CHECK(r.alive);
  CHECK(r.prefix_iff);
  CHECK(r.disjoint);
  CHECK(r.length_bound);
  CHECK(r.nested);
  CHECK(r.mass);
  CHECK(r.ok());

  SUBCASE("a corrupted tree fails its checks") {
    RTree bad = t;
    std::swap(bad.b[4], bad.b[6]);
    CHECK_FALSE(check_r_tree(ctx, bad, *m.M).ok());
    RTree shortM = t;
    CHECK_FALSE(check_r_tree(ctx, shortM, 0).length_bound);
  }

  SUBCASE("measure of small intervals") {
    // windows with 3^-(l+1) <= |U| < 3^-l
    int M = *m.M;
    RTree deep = build_r_tree(ctx, x, 10);
    CHECK(check_r_tree(ctx, deep, M).ok());
    for (int l = 1; l <= 8; ++l) {
      Integer p3 = 1;
      for (int i = 0; i <= l; ++i) p3 *= 3;
      Rational w = Rational(1) / Rational(p3);
      double bound = 4 * std::pow(2.0, -double(l) / M);
      for (Integer j = 0; j < p3; ++j) {
        Rational lo = Rational(j) / Rational(p3);
        CHECK(deep.mass_upper(lo, lo + w).get_d() <= bound);
        CHECK(deep.mass_upper(lo, lo + 2 * w).get_d() <= bound);
      }
    }
  }
}

TEST_CASE("box counting") {
  SUBCASE("full ternary tree") {
    std::vector<std::pair<int, std::size_t>> c;
    for (int d = 1; d <= 8; ++d) c.emplace_back(d, static_cast<std::size_t>(std::pow(3, d)));
    BoxEstimate b = box_dimension_estimate(c);
    CHECK(b.slope == doctest::Approx(1.0).epsilon(0.01));
    CHECK(b.residual < 1e-9);
  }
  SUBCASE("single path") {
    std::vector<std::vector<Word>> sets;
    for (int d = 3; d <= 6; ++d) sets.push_back({Word::repeat(Alphabet::Ternary, 1, d)});
    BoxEstimate b = box_dimension_estimate(sets);
    CHECK(std::abs(b.slope) < 1e-12);
  }
  SUBCASE("too few depths") {
    try {
      box_dimension_estimate(std::vector<std::pair<int, std::size_t>>{{1, 3}, {2, 9}});
      FAIL("expected TooFewDepths");
    } catch (const Error& e) {
      CHECK(e.kind() == "TooFewDepths");
    }
  }
  SUBCASE("slice at q = 3/2, y = 1/2 dominates the mass bound") {
    QContext ctx(parse_number("3/2"));
    FieldElement y = ctx.rational(Rational(1, 2));
    auto counts = slice_box_counts(ctx, y, {8, 10, 12, 14, 16});
    for (std::size_t i = 0; i + 1 < counts.size(); ++i) CHECK(counts[i].second <= counts[i + 1].second);
    BoxEstimate b = box_dimension_estimate(counts);
    CHECK(b.slope > 0);
    MEstimate m = estimate_M(ctx, 256, 12, 6, 0);
    REQUIRE(m.M);
    MESSAGE("box " << b.slope << " residual " << b.residual << " s " << dimension_lower_bound(*m.M));
    CHECK(dimension_lower_bound(*m.M) <= b.slope + 0.05);
  }
}
