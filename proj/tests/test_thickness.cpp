#include "doctest.h"
#include "okamoto/thickness.hpp"

#include <map>
#include <set>

using namespace okamoto;

namespace {

QContext rational_q(const std::string& s) { return QContext(AlgebraicReal::rational(parse_rational(s))); }

Rational rpow(const Rational& q, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= q;
  return r;
}

// q^k - q^(k-1) - ... - 1
Rational bonacci_poly(const Rational& q, int k) {
  Rational r = rpow(q, k);
  for (int i = 0; i < k; ++i) r -= rpow(q, i);
  return r;
}

bool overlaps(const FieldInterval& a, const FieldInterval& b) { return !(a.hi < b.lo || b.hi < a.lo); }

FieldInterval exact(const FieldElement& v) { return {v, v}; }

}  // namespace

TEST_CASE("H_q endpoints") {
  QContext g(bonacci_number(2));
  FieldInterval h = h_q_interval(g);
  CHECK(h.lo == -g.one);
  CHECK(h.hi == g.one);
  QContext c = rational_q("3/2");
  h = h_q_interval(c);
  CHECK(h.hi == c.rational(Rational(6, 5)));
  CHECK(h.lo == c.rational(Rational(-6, 5)));
  QContext t(bonacci_number(3));
  CHECK(t.inv_q < h_q_interval(t).hi);
}

TEST_CASE("W2 cover matches the endpoint formulas") {
  for (const char* qs : {"3/2", "1.999", "1.7"}) {
    QContext c = rational_q(qs);
    Rational q = parse_rational(qs);
    Rational hh = q / (q * q - 1);
    W2Cover cov = w2_cover_check(c);
    REQUIRE(cov.images.size() == 5);
    CHECK(cov.ok());
    std::vector<std::pair<Rational, Rational>> oracle;
    for (auto [i1, i2] : std::vector<std::pair<int, int>>{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}})
      oracle.emplace_back(((-hh + i2) / q + i1) / q, ((hh + i2) / q + i1) / q);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(cov.images[i].second.lo == c.rational(oracle[i].first));
      CHECK(cov.images[i].second.hi == c.rational(oracle[i].second));
      if (i + 1 < 5) CHECK(oracle[i + 1].first <= oracle[i].second);
    }
    CHECK(oracle.front().first == -hh);
    CHECK(oracle.back().second == hh);
  }
}

TEST_CASE("M follows the k-Bonacci bracket") {
  for (const char* qs : {"1.5", "1.6", "1.62", "1.7", "1.85", "1.93", "1.97", "1.99", "1.995", "1.9985", "1.999"}) {
    Rational q = parse_rational(qs);
    int expect = 0;
    for (int k = 2; k < 30; ++k)
      if (bonacci_poly(q, k) > 0) expect = k;
    CHECK(one_prefix_length(AlgebraicReal::rational(q)) == expect);
  }
  CHECK(one_prefix_length(AlgebraicReal::rational(parse_rational("1.9985"))) == 9);
  CHECK(one_prefix_length(AlgebraicReal::rational(Rational(3, 2))) == 0);
}

TEST_CASE("fixed expansion of one") {
  for (const char* qs : {"1.99", "1.9985", "3/2", "1.8"}) {
    QContext c = rational_q(qs);
    Rational q = parse_rational(qs);
    FixedExpansionOfOne e = fixed_expansion_of_one(c, 40);
    REQUIRE(e.digits.size() == 40);
    CHECK(e.prefix() == Word::repeat(Alphabet::Signed, 1, static_cast<std::size_t>(e.M)));
    std::set<std::pair<int, int>> w2 = {{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}};
    for (const auto& w : e.w2_tail()) CHECK(w2.count({w[0], w[1]}) == 1);
    for (int n = e.M; n <= 40; ++n) {
      Rational s = 0;
      for (int j = 1; j <= n; ++j) s += e.digits[static_cast<std::size_t>(j - 1)] / rpow(q, j);
      Rational err = 1 - s;
      if (err < 0) err = -err;
      CHECK(err <= 1 / (rpow(q, n) * (q - 1)));
    }
  }
  CHECK_THROWS(fixed_expansion_of_one(rational_q("1.9985"), 5));
}

TEST_CASE("A_q prefixes") {
  QContext c = rational_q("1.999");
  AqFamily f = build_aq_family(c, 40);
  auto free = f.free_indices();
  REQUIRE(!free.empty());
  std::size_t j0 = free.front();
  CHECK(build_aq_prefixes(c, static_cast<int>(j0) - 1).size() == 1);
  auto two = build_aq_prefixes(c, static_cast<int>(j0));
  REQUIRE(two.size() == 2);
  for (std::size_t i = 0; i + 1 < j0; ++i) CHECK(two[0][i] == two[1][i]);
  CHECK(two[0][j0 - 1] != two[1][j0 - 1]);

  auto words = build_aq_prefixes(c, 30);
  std::size_t nfree = 0;
  for (auto j : free) nfree += j <= 30;
  CHECK(words.size() == (std::size_t{1} << nfree));
  Word f1 = parse_word("0" + std::string(9, '1')), f0 = parse_word("1" + std::string(9, '0'));
  for (const auto& w : words) {
    CHECK(avoids(w, f1));
    CHECK(avoids(w, f0));
  }
  // Zeros of c alternate free, fixed one, free, fixed zero.
  std::vector<IndexClass> zeros;
  for (std::size_t j = 1; j <= 40; ++j)
    if (f.c.digits[j - 1] == 0) zeros.push_back(f.cls[j - 1]);
  for (std::size_t m = 0; m < zeros.size(); ++m) {
    IndexClass want = m % 2 == 0 ? IndexClass::Free : m % 4 == 1 ? IndexClass::FixedOne : IndexClass::FixedZero;
    CHECK(zeros[m] == want);
  }
  CHECK_THROWS_AS(build_aq_prefixes(rational_q("1.9"), 10), Error);
}

TEST_CASE("shifted partner") {
  QContext c = rational_q("1.999");
  AqFamily f = build_aq_family(c, 24);
  auto words = build_aq_prefixes(c, 24);
  Tail tau = parse_tail("(01)*");
  for (std::size_t i = 0; i < words.size(); i += 7) {
    const Word& a = words[i];
    Word b = shifted_partner(f, a);
    for (std::size_t j = 0; j < a.size(); ++j) {
      int cj = f.c.digits[j];
      if (cj == 1) CHECK(b[j] == 0);
      if (cj == -1) CHECK(b[j] == 1);
      if (cj == 0) CHECK(b[j] == a[j]);
    }
    CHECK(admissible_prefix({SubshiftKind::S, 9}, b));
    FieldElement lhs = project_q(c, tau.prepend(a)) - project_q(c, tau.prepend(b));
    CHECK(lhs == project_q(c, f.c.digits));
  }
  Word bad = words[0];
  std::vector<int> d = bad.symbols();
  d[0] = 1 - d[0];
  CHECK_THROWS(shifted_partner(f, Word(Alphabet::Binary, d)));
}

TEST_CASE("S^k automaton agrees with admissible_prefix") {
  for (int k : {2, 3, 5, 9}) {
    SkAutomaton aut(k);
    std::function<void(Word, int)> walk = [&](Word w, int s) {
      if (w.size() == 13) return;
      for (int bit : {0, 1}) {
        Word x = w;
        x.push_back(bit);
        int t = aut.next(s, bit);
        CHECK((t >= 0) == admissible_prefix({SubshiftKind::S, k}, x));
        if (t >= 0) walk(x, t);
      }
    };
    walk(Word(Alphabet::Binary), aut.start());
  }
  SkAutomaton s9(9);
  int after0 = s9.next(s9.next(s9.start(), 1), 0);
  int after1 = s9.next(s9.next(s9.start(), 0), 1);
  CHECK(s9.max_tail(after0).str() == parse_tail("(111111110)*").str());
  CHECK(s9.min_tail(after1).str() == parse_tail("(000000001)*").str());
}

TEST_CASE("S^k class recursion matches positional gaps") {
  for (auto [qs, fam] : std::vector<std::pair<const char*, const char*>>{
           {"1.999", "sk:9"}, {"1.999", "scaled-sk:9"}, {"1.8", "sk:3"}, {"1.9", "sk:4"}}) {
    QContext c = rational_q(qs);
    GapStructure gs = enumerate_gaps(c, parse_family(fam), 12, {12, 24});
    std::map<int, std::uint64_t> count;
    std::map<int, FieldElement> lmin, rmin, lenmax;
    for (const auto& g : gs.gaps) {
      ++count[g.level];
      FieldElement l = g.left_bridge.lo / g.length.lo, r = g.right_bridge.lo / g.length.lo;
      if (!lmin.count(g.level) || l < lmin[g.level]) lmin[g.level] = l;
      if (!rmin.count(g.level) || r < rmin[g.level]) rmin[g.level] = r;
      if (!lenmax.count(g.level) || lenmax[g.level] < g.length.hi) lenmax[g.level] = g.length.hi;
    }
    REQUIRE(gs.classes.size() == count.size());
    for (const auto& cl : gs.classes) {
      CHECK(cl.count == count[cl.level]);
      CHECK(cl.left_ratio.lo == lmin[cl.level]);
      CHECK(cl.right_ratio.lo == rmin[cl.level]);
      CHECK(cl.length.hi == lenmax[cl.level]);
    }
  }
}

TEST_CASE("S^9 cylinders overlap below q_9") {
  try {
    enumerate_gaps(rational_q("1.99"), parse_family("sk:9"), 12);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == "OverlappingCylinders");
  }
  CHECK_THROWS(parse_family("sk:x"));
  CHECK(parse_family("scaled-sk:9").str() == "scaled-sk:9");
}

TEST_CASE("largest S^9 gap") {
  QContext c = rational_q("1.999");
  GapStructure gs = enumerate_gaps(c, parse_family("sk:9"), 40);
  CHECK(gs.largest_gap().hi < c.pow(-8));
  CHECK(c.pow(6) < thickness_lower_bound(gs));
}

TEST_CASE("A_q gap law and structure") {
  QContext c = rational_q("1.999");
  AqFamily f = build_aq_family(c, 40);
  GapStructure gs = enumerate_gaps(c, {GapFamily::Aq, 9}, 30);
  REQUIRE(!gs.gaps.empty());
  std::set<int> levels;
  for (std::size_t i = 0; i < gs.gaps.size(); ++i) {
    const Gap& g = gs.gaps[i];
    levels.insert(g.level);
    CHECK(c.pow(-g.level) < g.length.lo);
    CHECK(g.length.hi < c.pow(1 - g.level));
    CHECK(c.pow(-g.level - 4) < g.left_bridge.lo);
    CHECK(c.pow(-g.level - 4) < g.right_bridge.lo);
    CHECK(g.lo.hi < g.hi.lo);
    CHECK(gs.hull_lo.hi < g.lo.lo);
    CHECK(g.hi.hi < gs.hull_hi.lo);
    if (i + 1 < gs.gaps.size()) CHECK(g.hi.hi < gs.gaps[i + 1].lo.lo);
  }
  for (int k = 2; k <= 30; ++k) CHECK((levels.count(k) == 1) == (f.forced_bit(static_cast<std::size_t>(k - 1)) < 0));
  // Hull sits in [1, 1/(q-1)].
  CHECK(c.one <= gs.hull_lo.lo);
  CHECK(gs.hull_hi.hi <= c.inv_qm1);
}

TEST_CASE("A_q gaps cover the complement of the prefix cover") {
  QContext c = rational_q("1.999");
  Rational q = parse_rational("1.999");
  const int L = 26, D = 70;
  AqFamily f = build_aq_family(c, D);
  GapStructure gs = enumerate_gaps(c, {GapFamily::Aq, 9}, L + 1);
  auto words = build_aq_prefixes(c, L);
  Rational tail = 1 / (rpow(q, D) * (q - 1));
  auto cyl = [&](const Word& w, bool top) {
    Rational s = 0;
    for (int j = 1; j <= D; ++j) {
      int b = j <= L ? w[static_cast<std::size_t>(j - 1)] : f.forced_bit(static_cast<std::size_t>(j));
      if (b < 0) b = top ? 1 : 0;
      s += b / rpow(q, j);
    }
    return s;
  };
  std::sort(words.begin(), words.end());
  std::size_t matched = 0;
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    Rational a = cyl(words[i], true), b = cyl(words[i + 1], false);
    FieldInterval ia{c.rational(a), c.rational(a + tail)}, ib{c.rational(b), c.rational(b + tail)};
    if (!(ia.hi < ib.lo)) continue;
    int hits = 0;
    for (const auto& g : gs.gaps)
      if (overlaps(g.lo, ia) && overlaps(g.hi, ib)) ++hits;
    CHECK(hits == 1);
    ++matched;
  }
  CHECK(matched == gs.gaps.size());
}

TEST_CASE("thickness estimates do not increase with level") {
  QContext c = rational_q("1.999");
  for (const char* fam : {"aq", "scaled-sk:9", "sk:4"}) {
    std::optional<FieldElement> prev;
    for (int level = 12; level <= 36; level += 4) {
      // Same truncation depth at every level so shared gaps carry identical enclosures.
      FieldElement t = thickness_lower_bound(enumerate_gaps(c, parse_family(fam), level, {0, 80 - level}));
      if (prev) CHECK(t <= *prev);
      prev = t;
    }
  }
}

TEST_CASE("degenerate single gap has thickness one") {
  QContext c = rational_q("3/2");
  GapStructure gs;
  gs.q = c.base;
  gs.hull_lo = exact(c.zero);
  gs.hull_hi = exact(c.rational(3));
  Gap g;
  g.level = 1;
  g.lo = exact(c.one);
  g.hi = exact(c.rational(2));
  g.length = exact(c.one);
  g.left_bridge = exact(c.one);
  g.right_bridge = exact(c.one);
  gs.gaps.push_back(g);
  CHECK(thickness_lower_bound(gs) == c.one);
  CHECK_THROWS(thickness_lower_bound(GapStructure{}));
}

TEST_CASE("interleaving") {
  QContext c = rational_q("1.999");
  GapStructure aq = enumerate_gaps(c, {GapFamily::Aq, 9}, 30);
  GapStructure sk = enumerate_gaps(c, {GapFamily::ScaledSk, 9}, 30, {0, 24});
  Interleaving r = interleaving_check(aq, sk);
  CHECK(r.interleaved);
  CHECK(!r.witness.empty());
  CHECK(interleaving_check(sk, aq).interleaved);
  // Diameter of the A_q hull beats the largest scaled S^9 gap by a wide margin.
  CHECK(sk.largest_gap().hi < aq.hull_hi.lo - aq.hull_lo.hi);

  GapStructure far = aq;
  far.hull_lo = exact(c.rational(5));
  far.hull_hi = exact(c.rational(6));
  far.gaps.clear();
  far.classes.clear();
  Interleaving d = interleaving_check(aq, far);
  CHECK(!d.interleaved);
  CHECK(d.witness.front() == "convex hulls are disjoint");
}

TEST_CASE("Newhouse certificates") {
  for (const char* qs : {"1.999", "1.9981"}) {
    NewhouseCertificate nc = newhouse_certify(rational_q(qs), 40);
    CHECK(nc.ok());
    CHECK(nc.aq_floor < nc.aq_thickness);
    CHECK(nc.sk_floor < nc.sk_thickness);
    CHECK(nc.interleaving.interleaved);
    CHECK(nc.hypotheses.size() == 6);
    Json j = nc.to_json(48);
    CHECK(j["witness_interval"].size() == 2);
    CHECK(j["level"] == 40);
  }
  try {
    newhouse_certify(rational_q("1.9"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == "BaseTooSmall");
  }
}

TEST_CASE("three-point slice witness") {
  QContext c = rational_q("1.999");
  Slice3Witness w = find_slice3_witness(c, 48);
  CHECK(w.certified());
  CHECK(w.y.lo <= w.y_rep);
  CHECK(w.y_rep <= w.y.hi);
  CHECK(w.refinements <= 1000);
  DynSystem sys(SystemKind::Eq, c);
  CHECK(enumerate_orbits(sys, w.y_rep * c.inv_qm1, 48).leaf_count() == 3);
  CHECK(w.slice.claim.type == ClaimType::ExactlyN);
  CHECK(w.slice.claim.n == 3);
  // The three first digits are 0, 1 and 2.
  std::set<int> first;
  for (const auto& cy : w.slice.cylinders) first.insert(cy.word[0]);
  CHECK(first == std::set<int>{0, 1, 2});
  CHECK_THROWS_AS(find_slice3_witness(c, 48, 5), Error);
}
